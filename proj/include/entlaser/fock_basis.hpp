#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "entlaser/sparse.hpp"

namespace entlaser {

/// Truncated occupation-number basis for a fixed number of bosonic modes.
/// Per-mode occupation runs over [0, cutoff]; basis index is row-major with
/// mode 0 slowest. Mode order for the four-mode space is (a_h, a_v, b_h, b_v).
class FockBasis {
public:
    FockBasis(int modes, int cutoff, std::size_t memory_budget_bytes = default_memory_budget);

    int modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    std::int64_t dim() const { return dim_; }
    std::int64_t stride(int mode) const { return strides_[mode]; }

    std::int64_t index(const std::vector<int>& occ) const;
    int occupation(std::int64_t index, int mode) const;
    int total_occupation(std::int64_t index) const;

    /// Lowering operator for one mode, \<n-1|a|n\> = sqrt(n).
    SparseMatrix annihilation(int mode) const;
    SparseMatrix creation(int mode) const;
    SparseMatrix number(int mode) const;

    static constexpr std::size_t default_memory_budget = std::size_t(6) << 30;

private:
    int modes_;
    int cutoff_;
    std::int64_t dim_;
    std::vector<std::int64_t> strides_;
};

}  // namespace entlaser

#include "entlaser/fock_basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace entlaser {

FockBasis::FockBasis(int modes, int cutoff, std::size_t memory_budget_bytes)
    : modes_(modes), cutoff_(cutoff) {
    if (modes < 1 || modes > 8) throw std::invalid_argument("FockBasis: modes must be in [1,8]");
    if (cutoff < 1) throw std::invalid_argument("FockBasis: cutoff must be >= 1");

    const std::int64_t levels = cutoff + 1;
    std::int64_t d = 1;
    for (int m = 0; m < modes; ++m) {
        if (d > static_cast<std::int64_t>(1) << 40)
            throw std::invalid_argument("FockBasis: dimension overflow");
        d *= levels;
    }
    dim_ = d;

    // rough footprint of an operator set on this space: a few tens of
    // complex entries per basis state
    const std::size_t estimated_bytes = static_cast<std::size_t>(dim_) * 48 * 24;
    if (estimated_bytes > memory_budget_bytes)
        throw std::invalid_argument(
            "FockBasis: estimated operator storage " + std::to_string(estimated_bytes) +
            " bytes exceeds memory budget of " + std::to_string(memory_budget_bytes));

    strides_.resize(modes);
    strides_[modes - 1] = 1;
    for (int m = modes - 2; m >= 0; --m) strides_[m] = strides_[m + 1] * levels;
}

std::int64_t FockBasis::index(const std::vector<int>& occ) const {
    if (static_cast<int>(occ.size()) != modes_)
        throw std::invalid_argument("FockBasis::index: wrong number of modes");
    std::int64_t idx = 0;
    for (int m = 0; m < modes_; ++m) {
        if (occ[m] < 0 || occ[m] > cutoff_)
            throw std::invalid_argument("FockBasis::index: occupation out of range");
        idx += occ[m] * strides_[m];
    }
    return idx;
}

int FockBasis::occupation(std::int64_t index, int mode) const {
    return static_cast<int>((index / strides_[mode]) % (cutoff_ + 1));
}

int FockBasis::total_occupation(std::int64_t index) const {
    int total = 0;
    for (int m = 0; m < modes_; ++m) total += occupation(index, m);
    return total;
}

SparseMatrix FockBasis::annihilation(int mode) const {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(dim_));
    for (std::int64_t i = 0; i < dim_; ++i) {
        const int n = occupation(i, mode);
        if (n >= 1) t.push_back({i - strides_[mode], i, std::sqrt(static_cast<double>(n))});
    }
    return SparseMatrix::from_triplets(dim_, dim_, std::move(t));
}

SparseMatrix FockBasis::creation(int mode) const { return annihilation(mode).adjoint(); }

SparseMatrix FockBasis::number(int mode) const {
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(dim_));
    for (std::int64_t i = 0; i < dim_; ++i) {
        const int n = occupation(i, mode);
        if (n > 0) t.push_back({i, i, static_cast<double>(n)});
    }
    return SparseMatrix::from_triplets(dim_, dim_, std::move(t));
}

}  // namespace entlaser

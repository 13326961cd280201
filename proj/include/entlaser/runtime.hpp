#pragma once

#include <atomic>
#include <stdexcept>

namespace entlaser {

inline constexpr const char* version_string = "1.0.0";

// Global switch between the OpenMP kernels and their serial reference
// implementations. Tests and the benchmark flip this; everything else
// leaves it at the default (parallel on).
namespace runtime {

inline std::atomic<bool>& parallel_flag() {
    static std::atomic<bool> flag{true};
    return flag;
}

inline bool parallel_enabled() { return parallel_flag().load(std::memory_order_relaxed); }
inline void set_parallel(bool on) { parallel_flag().store(on, std::memory_order_relaxed); }

class SerialGuard {
public:
    SerialGuard() : previous_(parallel_enabled()) { set_parallel(false); }
    ~SerialGuard() { set_parallel(previous_); }
    SerialGuard(const SerialGuard&) = delete;
    SerialGuard& operator=(const SerialGuard&) = delete;

private:
    bool previous_;
};

}  // namespace runtime

// Central numerical tolerances. Values are defaults; operations that take a
// tolerance parameter default to these.
struct Numerics {
    static constexpr double rk4_default_step = 1e-3;
    static constexpr double quadrature_abs_tol = 1e-10;
    static constexpr double quadrature_rel_tol = 1e-12;
    static constexpr double krylov_tol = 1e-10;
    static constexpr double hermiticity_tol = 1e-12;
    static constexpr double imag_residue_tol = 1e-10;
    static constexpr double uncertainty_floor = -1e-9;
    static constexpr double truncation_warn = 1e-9;
    static constexpr double vacuous_photon_number = 1e-12;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace entlaser

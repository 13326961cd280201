#include "entlaser/fock.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <random>
#include <stdexcept>
#include <string>

namespace entlaser::fock {

FockDensity FockDensity::from_state(const FockState& state) {
    return {state.basis, state.amplitudes * state.amplitudes.adjoint()};
}

double ideal_state_tail(double tau, int cutoff) {
    // sum_{n > cutoff} (n+1) x^n / cosh^4, x = tanh^2(tau);
    // sum_{n >= m} (n+1) x^n = x^m [(m+1)(1-x) + x] / (1-x)^2
    if (tau == 0.0) return 0.0;
    const double x = std::tanh(tau) * std::tanh(tau);
    const int m = cutoff + 1;
    const double tail = std::pow(x, m) * ((m + 1) * (1.0 - x) + x) / ((1.0 - x) * (1.0 - x));
    const double c = std::cosh(tau);
    return tail / (c * c * c * c);
}

int cutoff_for_tau(double tau, double rel_tol, int max_cutoff) {
    const double n_mean = 4.0 * std::sinh(tau) * std::sinh(tau);
    for (int c = 4; c <= max_cutoff; ++c) {
        // the dropped shells carry at most 4c photons each; bound the <N>
        // error by tail * 4 * (c+1) against n_mean
        const double err = ideal_state_tail(tau, c) * 4.0 * (c + 1);
        if (n_mean == 0.0 || err / n_mean < rel_tol) return c;
    }
    return max_cutoff;
}

FockState build_ideal_state(double tau, int cutoff) {
    if (tau < 0.0) throw std::invalid_argument("build_ideal_state: tau must be >= 0");
    FockBasis basis(4, cutoff);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(basis.dim());

    const double th = std::tanh(tau);
    const double sech2 = 1.0 / (std::cosh(tau) * std::cosh(tau));
    for (int n = 0; n <= cutoff; ++n) {
        const double shell = sech2 * std::pow(th, n);
        for (int m = 0; m <= n; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            amp[basis.index({n - m, m, m, n - m})] = sign * shell;
        }
    }

    const double deficit = ideal_state_tail(tau, cutoff);
    if (deficit > Numerics::truncation_warn)
        std::cerr << "warning: ideal-state truncation deficit " << deficit << " at tau=" << tau
                  << " cutoff=" << cutoff << "\n";
    return {basis, std::move(amp)};
}

SparseMatrix build_hamiltonian(double kappa, double phi, double f, int cutoff,
                               std::size_t memory_budget_bytes) {
    FockBasis basis(4, cutoff, memory_budget_bytes);
    const cplx ik(0.0, kappa);
    const cplx pair_hv = ik;                                 // a_h^dag b_v^dag
    const cplx pair_vh = -ik * f * std::polar(1.0, phi);     // a_v^dag b_h^dag

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(basis.dim()) * 4);
    for (std::int64_t i = 0; i < basis.dim(); ++i) {
        const int nah = basis.occupation(i, stokes::AH);
        const int nav = basis.occupation(i, stokes::AV);
        const int nbh = basis.occupation(i, stokes::BH);
        const int nbv = basis.occupation(i, stokes::BV);
        if (nah < cutoff && nbv < cutoff) {
            const std::int64_t j =
                i + basis.stride(stokes::AH) + basis.stride(stokes::BV);
            const cplx v = pair_hv * std::sqrt((nah + 1.0) * (nbv + 1.0));
            t.push_back({j, i, v});
            t.push_back({i, j, std::conj(v)});
        }
        if (nav < cutoff && nbh < cutoff) {
            const std::int64_t j =
                i + basis.stride(stokes::AV) + basis.stride(stokes::BH);
            const cplx v = pair_vh * std::sqrt((nav + 1.0) * (nbh + 1.0));
            t.push_back({j, i, v});
            t.push_back({i, j, std::conj(v)});
        }
    }
    return SparseMatrix::from_triplets(basis.dim(), basis.dim(), std::move(t));
}

namespace {

// One Lanczos pass from v; returns subspace size actually built.
struct LanczosDecomposition {
    std::vector<Eigen::VectorXcd> v;
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;  // beta[k] couples v[k] and v[k+1]
    int m = 0;
    bool complete = false;  // invariant subspace found
};

LanczosDecomposition lanczos(const SparseMatrix& h, const Eigen::VectorXcd& start, int m_max) {
    LanczosDecomposition d;
    d.alpha.resize(m_max);
    d.beta.resize(m_max);
    d.v.push_back(start.normalized());
    for (int k = 0; k < m_max; ++k) {
        Eigen::VectorXcd w = h.apply(d.v[k]);
        if (k > 0) w -= d.beta[k - 1] * d.v[k - 1];
        d.alpha[k] = std::real(d.v[k].dot(w));
        w -= d.alpha[k] * d.v[k];
        // full reorthogonalization, twice for stability
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j <= k; ++j) w -= d.v[j].dot(w) * d.v[j];
        const double b = w.norm();
        d.beta[k] = b;
        d.m = k + 1;
        if (b < 1e-14) {
            d.complete = true;
            break;
        }
        if (k + 1 < m_max) d.v.push_back(w / b);
    }
    return d;
}

// exp(-i dt T) e1 for the tridiagonal T of the decomposition.
Eigen::VectorXcd tridiag_exp_e1(const LanczosDecomposition& d, double dt) {
    const int m = d.m;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
        t(k, k) = d.alpha[k];
        if (k + 1 < m) {
            t(k, k + 1) = d.beta[k];
            t(k + 1, k) = d.beta[k];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd e1 = es.eigenvectors().row(0).transpose();
    Eigen::VectorXcd u(m);
    for (int k = 0; k < m; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < m; ++j)
            acc += es.eigenvectors()(k, j) * std::polar(1.0, -dt * es.eigenvalues()[j]) * e1[j];
        u[k] = acc;
    }
    return u;
}

}  // namespace

FockState evolve_exact(const FockState& state, const SparseMatrix& hamiltonian, double t,
                       double tol) {
    if (hamiltonian.rows() != state.basis.dim())
        throw std::invalid_argument("evolve_exact: dimension mismatch");
    if (t == 0.0) return state;

    const int m_max = std::min<std::int64_t>(40, state.basis.dim());
    Eigen::VectorXcd psi = state.amplitudes;
    double remaining = t;
    const double sign = remaining > 0 ? 1.0 : -1.0;
    remaining = std::abs(remaining);
    int guard = 0;

    while (remaining > 0.0) {
        const double psi_norm = psi.norm();
        if (psi_norm == 0.0) break;
        const LanczosDecomposition d = lanczos(hamiltonian, psi, m_max);

        double dt = remaining;
        Eigen::VectorXcd u;
        for (;;) {
            u = tridiag_exp_e1(d, sign * dt);
            if (d.complete) break;  // exact subspace, any dt is fine
            const double residual = d.beta[d.m - 1] * std::abs(u[d.m - 1]);
            if (residual <= tol * std::max(dt / std::abs(t), 1e-3)) break;
            dt /= 2.0;
            if (++guard > 400)
                throw NumericalError("evolve_exact: Krylov step control failed to converge, residual " +
                                     std::to_string(residual));
        }

        Eigen::VectorXcd next = Eigen::VectorXcd::Zero(psi.size());
        for (int k = 0; k < d.m; ++k) next += u[k] * d.v[k];
        psi = psi_norm * next;
        remaining -= dt;
    }
    return {state.basis, std::move(psi)};
}

namespace {

// sqrt(binom(n, k) eta^(n-k) (1-eta)^k): amplitude for losing k of n photons.
double damping_coefficient(int n, int k, double eta) {
    double binom = 1.0;
    for (int i = 0; i < k; ++i) binom *= static_cast<double>(n - i) / (i + 1);
    return std::sqrt(binom * std::pow(eta, n - k) * std::pow(1.0 - eta, k));
}

void validate_eta(const std::array<double, 4>& eta) {
    for (double e : eta)
        if (!(e >= 0.0 && e <= 1.0))
            throw std::invalid_argument("loss channel: eta must lie in [0, 1]");
}

// Strided in-place single-mode damping: every output element pulls from the
// same rest-indices with k extra photons in the target mode.
void apply_mode_loss_strided(Eigen::MatrixXcd& rho, const FockBasis& basis, int mode, double eta) {
    if (eta == 1.0) return;
    const std::int64_t dim = basis.dim();
    const std::int64_t s = basis.stride(mode);
    const int levels = basis.cutoff() + 1;

    std::vector<double> coef(static_cast<std::size_t>(levels) * levels, 0.0);
    for (int n = 0; n < levels; ++n)
        for (int k = 0; k <= n; ++k)
            coef[static_cast<std::size_t>(n) * levels + k] = damping_coefficient(n, k, eta);

    Eigen::MatrixXcd out(dim, dim);
    const bool parallel = runtime::parallel_enabled();
#pragma omp parallel for schedule(static) if (parallel)
    for (std::int64_t j = 0; j < dim; ++j) {
        const int nj = basis.occupation(j, mode);
        for (std::int64_t i = 0; i < dim; ++i) {
            const int ni = basis.occupation(i, mode);
            const int kmax = std::min(basis.cutoff() - ni, basis.cutoff() - nj);
            cplx acc = 0.0;
            for (int k = 0; k <= kmax; ++k)
                acc += coef[static_cast<std::size_t>(ni + k) * levels + k] *
                       coef[static_cast<std::size_t>(nj + k) * levels + k] *
                       rho(i + k * s, j + k * s);
            out(i, j) = acc;
        }
    }
    rho.swap(out);
}

}  // namespace

FockDensity apply_loss_channel(const FockDensity& density, const std::array<double, 4>& eta) {
    validate_eta(eta);
    FockDensity result = density;
    for (int mode = 0; mode < 4; ++mode)
        apply_mode_loss_strided(result.rho, result.basis, mode, eta[mode]);
    return result;
}

FockDensity apply_loss_channel_kraus(const FockDensity& density, const std::array<double, 4>& eta) {
    validate_eta(eta);
    FockDensity result = density;
    const FockBasis& basis = result.basis;
    for (int mode = 0; mode < 4; ++mode) {
        if (eta[mode] == 1.0) continue;
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(basis.dim(), basis.dim());
        for (int k = 0; k <= basis.cutoff(); ++k) {
            std::vector<Triplet> t;
            for (std::int64_t i = 0; i < basis.dim(); ++i) {
                const int n = basis.occupation(i, mode);
                if (n < k) continue;
                t.push_back({i - k * basis.stride(mode), i, damping_coefficient(n, k, eta[mode])});
            }
            const SparseMatrix kraus = SparseMatrix::from_triplets(basis.dim(), basis.dim(), std::move(t));
            const Eigen::MatrixXcd kr = kraus.apply_dense(result.rho);
            acc += kraus.apply_dense(kr.adjoint()).adjoint();
        }
        result.rho = acc;
    }
    return result;
}

namespace {

double checked_real(cplx value, const char* what) {
    const double scale = std::max(1.0, std::abs(value.real()));
    if (std::abs(value.imag()) > Numerics::imag_residue_tol * scale)
        throw NumericalError(std::string(what) + ": imaginary residue " +
                             std::to_string(value.imag()) + " exceeds tolerance");
    return value.real();
}

}  // namespace

double expectation(const FockState& state, const SparseMatrix& op) {
    const cplx val = state.amplitudes.dot(op.apply(state.amplitudes));
    return checked_real(val, "expectation");
}

double expectation(const FockDensity& density, const SparseMatrix& op) {
    // tr(rho O) = sum_{r, c in nz(O)} O_rc rho_cr
    const auto& row_ptr = op.row_ptr();
    const auto& col_idx = op.col_idx();
    const auto& values = op.values();
    cplx acc = 0.0;
    for (std::int64_t r = 0; r < op.rows(); ++r)
        for (std::int64_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k)
            acc += values[k] * density.rho(col_idx[k], r);
    return checked_real(acc, "expectation");
}

namespace {

template <typename StateLike>
JBoundCheck j_bound_impl(const StateLike& s, const stokes::FockOperatorSet& ops) {
    const double jx = expectation(s, ops.jx);
    const double jy = expectation(s, ops.jy);
    const double jz = expectation(s, ops.jz);
    const double j2 = expectation(s, ops.j2);
    JBoundCheck check;
    check.lhs = std::sqrt(jx * jx + jy * jy + jz * jz);
    check.rhs = std::sqrt(j2 + 0.25) - 0.5;
    check.ok = check.lhs <= check.rhs + 1e-10;
    return check;
}

}  // namespace

JBoundCheck check_j_bound(const FockState& state, const stokes::FockOperatorSet& ops) {
    return j_bound_impl(state, ops);
}

JBoundCheck check_j_bound(const FockDensity& density, const stokes::FockOperatorSet& ops) {
    return j_bound_impl(density, ops);
}

FockState random_state(const FockBasis& basis, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd amp(basis.dim());
    for (std::int64_t i = 0; i < basis.dim(); ++i) amp[i] = cplx(normal(rng), normal(rng));
    amp.normalize();
    return {basis, std::move(amp)};
}

FockState embed(const FockState& state, int new_cutoff) {
    if (new_cutoff < state.basis.cutoff())
        throw std::invalid_argument("embed: new cutoff must not be smaller");
    FockBasis basis(state.basis.modes(), new_cutoff);
    Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(basis.dim());
    std::vector<int> occ(state.basis.modes());
    for (std::int64_t i = 0; i < state.basis.dim(); ++i) {
        for (int m = 0; m < state.basis.modes(); ++m) occ[m] = state.basis.occupation(i, m);
        amp[basis.index(occ)] = state.amplitudes[i];
    }
    return {basis, std::move(amp)};
}

FockState coherent_state(const FockBasis& basis, const std::array<cplx, 4>& alpha) {
    if (basis.modes() != 4) throw std::invalid_argument("coherent_state: expects 4 modes");
    const int levels = basis.cutoff() + 1;
    std::array<std::vector<cplx>, 4> mode_amp;
    for (int m = 0; m < 4; ++m) {
        mode_amp[m].resize(levels);
        cplx term = std::exp(-0.5 * std::norm(alpha[m]));
        for (int n = 0; n < levels; ++n) {
            mode_amp[m][n] = term;
            term *= alpha[m] / std::sqrt(n + 1.0);
        }
    }
    Eigen::VectorXcd amp(basis.dim());
    for (std::int64_t i = 0; i < basis.dim(); ++i) {
        cplx v = 1.0;
        for (int m = 0; m < 4; ++m) v *= mode_amp[m][basis.occupation(i, m)];
        amp[i] = v;
    }
    return {basis, std::move(amp)};
}

}  // namespace entlaser::fock

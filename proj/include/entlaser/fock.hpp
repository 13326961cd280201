#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "entlaser/fock_basis.hpp"
#include "entlaser/runtime.hpp"
#include "entlaser/sparse.hpp"
#include "entlaser/stokes.hpp"

namespace entlaser::fock {

/// Pure state of the four polarization modes on the truncated basis.
struct FockState {
    FockBasis basis;
    Eigen::VectorXcd amplitudes;

    double norm() const { return amplitudes.norm(); }
};

/// Density matrix on the truncated basis; trace deficit = truncation loss.
struct FockDensity {
    FockBasis basis;
    Eigen::MatrixXcd rho;

    static FockDensity from_state(const FockState& state);

    double trace_real() const { return rho.trace().real(); }
    double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
};

/// Truncation deficit of the ideal two-pair-squeezed state: total weight of
/// the photon-number shells above the cutoff.
double ideal_state_tail(double tau, int cutoff);

/// Smallest cutoff whose tail-induced relative error on <N> stays below
/// rel_tol at this tau.
int cutoff_for_tau(double tau, double rel_tol = 1e-7, int max_cutoff = 40);

/// The lossless down-conversion state at effective interaction time tau:
/// amplitude (-1)^m tanh^n(tau)/cosh^2(tau) on |n-m, m, m, n-m>, restricted
/// to complete shells n <= cutoff so that every shell stays a singlet.
/// Warns on stderr when the truncation deficit exceeds the configured bound.
FockState build_ideal_state(double tau, int cutoff);

/// Pair-creation generator i*kappa (a_h^dag b_v^dag - f e^{i phi} a_v^dag b_h^dag) + h.c.
SparseMatrix build_hamiltonian(double kappa, double phi, double f, int cutoff,
                               std::size_t memory_budget_bytes = FockBasis::default_memory_budget);

/// psi(t) = exp(-i H t) psi via a Lanczos (Krylov-subspace) expansion with
/// adaptive substepping; norm-controlled error below tol.
FockState evolve_exact(const FockState& state, const SparseMatrix& hamiltonian, double t,
                       double tol = Numerics::krylov_tol);

/// Per-mode amplitude-damping channel with transmissions eta (mode order
/// a_h, a_v, b_h, b_v), applied mode by mode. Dispatches between the strided
/// OpenMP kernel and the serial explicit-Kraus reference.
FockDensity apply_loss_channel(const FockDensity& density, const std::array<double, 4>& eta);

/// Serial reference: explicit Kraus operators K_k = ((1-eta)^k/k!)^{1/2}
/// eta^{n/2} c^k summed as K rho K^dag.
FockDensity apply_loss_channel_kraus(const FockDensity& density, const std::array<double, 4>& eta);

double expectation(const FockState& state, const SparseMatrix& op);
double expectation(const FockDensity& density, const SparseMatrix& op);

struct JBoundCheck {
    double lhs;  // |<J>|
    double rhs;  // sqrt(<J^2> + 1/4) - 1/2
    bool ok;
};

JBoundCheck check_j_bound(const FockState& state, const stokes::FockOperatorSet& ops);
JBoundCheck check_j_bound(const FockDensity& density, const stokes::FockOperatorSet& ops);

/// Normalized state with amplitudes drawn from a spherically symmetric
/// complex Gaussian; fully determined by the seed.
FockState random_state(const FockBasis& basis, std::uint64_t seed);

/// Same state on a basis with a larger cutoff. Observable evaluations use
/// this headroom so that operator products never clip at the boundary.
FockState embed(const FockState& state, int new_cutoff);

/// Product of coherent states |alpha_m> in the four polarization modes.
FockState coherent_state(const FockBasis& basis, const std::array<cplx, 4>& alpha);

}  // namespace entlaser::fock

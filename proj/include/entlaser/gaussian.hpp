#pragma once

#include <array>
#include <utility>

#include <Eigen/Dense>

#include "entlaser/runtime.hpp"
#include "entlaser/stokes.hpp"

namespace entlaser::gaussian {

using stokes::Matrix8d;
using stokes::QuadraticForm;
using Matrix8cd = Eigen::Matrix<std::complex<double>, 8, 8>;

/// Physical parameters of the driven, lossy four-mode dynamics. Rates are
/// per pass; t = 1 is one pass through the crystal.
struct DriftSpec {
    double kappa0 = 1.0;    // initial pair-creation rate
    double Lambda = 0.0;    // pump loss rate, kappa(t) = kappa0 exp(-Lambda t)
    double lambda_a = 0.0;  // loss rate of the a-arm modes
    double lambda_b = 0.0;  // loss rate of the b-arm modes
    double phi = 0.0;       // phase mismatch between the twin-beam pairs
    double f = 1.0;         // amplitude mismatch (1 = ideal)

    double kappa(double t) const;
    double lambda_bar() const { return 0.5 * (lambda_a + lambda_b); }
    double delta_lambda() const { return lambda_a - lambda_b; }

    void validate() const;
};

/// Zero-mean Gaussian state: symmetrized second moments <{q_i,q_j}>/2 in the
/// c-basis quadrature ordering, plus elapsed time.
struct CovarianceState {
    Matrix8d sigma;
    double t = 0.0;

    static CovarianceState vacuum();
};

struct WitnessReport {
    double j2 = 0.0;
    double n = 0.0;
    double ratio = 0.0;
    bool entangled = false;
    double margin = 0.0;
};

/// Drift A and diffusion D of the moment equation
/// d(Sigma)/dt = A Sigma + Sigma A^T + D.
/// A carries the squeezing signs (modes c1, c2 at rate kappa(t), c3, c4 at
/// f kappa(t)), the mean damping and the delta-lambda/2 partner coupling;
/// D injects vacuum noise at each polarization mode's own loss rate. The
/// phase mismatch is not part of the drift; it is applied as a covariance
/// rotation (apply_phase_mismatch) after evolution.
std::pair<Matrix8d, Matrix8d> drift_and_diffusion(const DriftSpec& spec, double t);

/// Fixed-step classical RK4 for the moment equation; the final step is
/// shortened to land exactly on t_end. Sigma is re-symmetrized each step.
CovarianceState evolve_rk4(const CovarianceState& state, const DriftSpec& spec, double t_end,
                           double h = Numerics::rk4_default_step);

/// Closed-form per-quadrature solution for balanced loss (lambda_a =
/// lambda_b, phi = 0, f = 1): <x^2>(t) = 1/2 e^{2K} + lambda Int_0^t
/// e^{2(K(t)-K(u))} du with K(t) = Int_0^t (kappa - lambda); squeezed
/// quadratures with kappa -> -kappa. The noise integral uses adaptive
/// Simpson quadrature (fully closed form when Lambda = 0).
CovarianceState evolve_analytic_balanced(const DriftSpec& spec, double t_end);

/// Post-hoc per-mode loss, eta in the polarization-mode order
/// (a_h, a_v, b_h, b_v): diagonal blocks eta S + (1-eta)/2 I, cross blocks
/// sqrt(eta_m eta_n) S, applied in the a/b basis.
CovarianceState apply_loss(const CovarianceState& state, const std::array<double, 4>& eta);

/// Phase-space rotation by phi/2 on modes c3 and c4 (congruence transform),
/// mapping the phase-mismatched dynamics onto the ideal one.
CovarianceState apply_phase_mismatch(const CovarianceState& state, double phi);

/// <1/2 q^T G q + c0> = 1/2 tr(G Sigma) + c0.
double expect_quadratic(const CovarianceState& state, const QuadraticForm& form);

/// <(1/2 q^T F q + cf)(1/2 q^T G q + cg)> for the zero-mean Gaussian state,
/// via Wick pairing of operator moments M = Sigma + (i/2) Omega.
double expect_quadratic_pair(const CovarianceState& state, const QuadraticForm& f,
                             const QuadraticForm& g);

/// <J^2> = sum_i <(1/2 q^T G_i q)^2>, exact for zero-mean Gaussian states.
/// Throws NumericalError if the imaginary residue exceeds tolerance.
double expect_J2(const CovarianceState& state);

/// Bundles <J^2>, <N>, their ratio and the entanglement verdict
/// (ratio < 1/2). <N> below the vacuous threshold yields a defined report
/// with entangled = false and ratio = 0.
WitnessReport witness(const CovarianceState& state);

/// Smallest eigenvalue of Sigma + (i/2) Omega; >= 0 (up to rounding) for
/// physical states.
double uncertainty_min_eigenvalue(const CovarianceState& state);

/// det(2 Sigma); equals 1 for pure Gaussian states.
double purity_determinant(const CovarianceState& state);

}  // namespace entlaser::gaussian

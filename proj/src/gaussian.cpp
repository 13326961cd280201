#include "entlaser/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace entlaser::gaussian {

namespace {

// growing quadratures x1, p2, p3, x4 carry squeezing sign +1
constexpr std::array<double, 8> squeeze_sign = {+1, -1, -1, +1, -1, +1, +1, -1};

// partner quadratures coupled by unbalanced loss
constexpr std::array<std::pair<int, int>, 4> partner_pairs = {
    std::pair{stokes::X1, stokes::X2}, {stokes::P1, stokes::P2},
    {stokes::X3, stokes::X4}, {stokes::P3, stokes::P4}};

}  // namespace

double DriftSpec::kappa(double t) const { return kappa0 * std::exp(-Lambda * t); }

void DriftSpec::validate() const {
    if (!(kappa0 >= 0.0)) throw std::invalid_argument("DriftSpec: kappa0 must be >= 0");
    if (Lambda < 0.0) throw std::invalid_argument("DriftSpec: Lambda must be >= 0");
    if (lambda_a < 0.0 || lambda_b < 0.0)
        throw std::invalid_argument("DriftSpec: loss rates must be >= 0");
    if (!(f > 0.0)) throw std::invalid_argument("DriftSpec: f must be > 0");
}

CovarianceState CovarianceState::vacuum() { return {0.5 * Matrix8d::Identity(), 0.0}; }

std::pair<Matrix8d, Matrix8d> drift_and_diffusion(const DriftSpec& spec, double t) {
    spec.validate();
    const double k = spec.kappa(t);
    const double lbar = spec.lambda_bar();
    const double dl = spec.delta_lambda();

    Matrix8d a = Matrix8d::Zero();
    for (int i = 0; i < 8; ++i) {
        const double rate = (i < 4) ? k : spec.f * k;
        a(i, i) = squeeze_sign[i] * rate - lbar;
    }
    for (auto [i, j] : partner_pairs) {
        a(i, j) -= dl / 2.0;
        a(j, i) -= dl / 2.0;
    }

    Matrix8d d = lbar * Matrix8d::Identity();
    for (auto [i, j] : partner_pairs) {
        d(i, j) += dl / 2.0;
        d(j, i) += dl / 2.0;
    }
    return {a, d};
}

namespace {

Matrix8d moment_rhs(const Matrix8d& sigma, const DriftSpec& spec, double t, const Matrix8d& d) {
    const auto [a, unused] = drift_and_diffusion(spec, t);
    (void)unused;
    return a * sigma + sigma * a.transpose() + d;
}

}  // namespace

CovarianceState evolve_rk4(const CovarianceState& state, const DriftSpec& spec, double t_end,
                           double h) {
    spec.validate();
    if (t_end < state.t) throw std::invalid_argument("evolve_rk4: t_end before state time");
    if (t_end == state.t) return state;
    if (!(h > 0.0)) throw std::invalid_argument("evolve_rk4: step must be > 0");
    if (h > t_end - state.t)
        throw std::invalid_argument("evolve_rk4: step exceeds the integration interval");

    const Matrix8d d = drift_and_diffusion(spec, state.t).second;
    Matrix8d sigma = state.sigma;
    double t = state.t;
    while (t < t_end) {
        const double step = std::min(h, t_end - t);
        const Matrix8d k1 = moment_rhs(sigma, spec, t, d);
        const Matrix8d k2 = moment_rhs(sigma + 0.5 * step * k1, spec, t + 0.5 * step, d);
        const Matrix8d k3 = moment_rhs(sigma + 0.5 * step * k2, spec, t + 0.5 * step, d);
        const Matrix8d k4 = moment_rhs(sigma + step * k3, spec, t + step, d);
        sigma += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        sigma = 0.5 * (sigma + sigma.transpose()).eval();
        t += step;
        if (!sigma.allFinite())
            throw NumericalError("evolve_rk4: non-finite covariance at t = " + std::to_string(t));
    }
    return {sigma, t_end};
}

namespace {

// integral of kappa over [0, t]
double kappa_integral(const DriftSpec& spec, double t) {
    if (spec.Lambda == 0.0) return spec.kappa0 * t;
    return spec.kappa0 / spec.Lambda * (1.0 - std::exp(-spec.Lambda * t));
}

struct NoiseIntegrand {
    const DriftSpec& spec;
    double t_end;
    double sign;  // +1 growing, -1 squeezed

    double k_accum(double t) const {
        return sign * kappa_integral(spec, t) - spec.lambda_bar() * t;
    }
    double operator()(double u) const { return std::exp(2.0 * (k_accum(t_end) - k_accum(u))); }
};

double simpson(const NoiseIntegrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(c) + f(b));
}

double adaptive_simpson(const NoiseIntegrand& f, double a, double b, double whole, double tol,
                        int depth) {
    const double c = 0.5 * (a + b);
    const double left = simpson(f, a, c);
    const double right = simpson(f, c, b);
    const double err = left + right - whole;
    if (std::abs(err) <= 15.0 * tol || depth >= 48) {
        if (depth >= 48 && std::abs(err) > 15.0 * tol)
            throw NumericalError("evolve_analytic_balanced: quadrature failed to converge, error "
                                 "estimate " + std::to_string(std::abs(err) / 15.0));
        return left + right + err / 15.0;
    }
    return adaptive_simpson(f, a, c, left, tol / 2.0, depth + 1) +
           adaptive_simpson(f, c, b, right, tol / 2.0, depth + 1);
}

double noise_integral(const DriftSpec& spec, double t_end, double sign) {
    const double lambda = spec.lambda_bar();
    if (lambda == 0.0 || t_end == 0.0) return 0.0;
    if (spec.Lambda == 0.0) {
        // constant-rate closed form
        const double rate = sign * spec.kappa0 - lambda;
        if (std::abs(rate) < 1e-300) return t_end;
        return (std::exp(2.0 * rate * t_end) - 1.0) / (2.0 * rate);
    }
    const NoiseIntegrand f{spec, t_end, sign};
    const double whole = simpson(f, 0.0, t_end);
    const double tol =
        std::max(Numerics::quadrature_abs_tol, Numerics::quadrature_rel_tol * std::abs(whole));
    return adaptive_simpson(f, 0.0, t_end, whole, tol, 0);
}

}  // namespace

CovarianceState evolve_analytic_balanced(const DriftSpec& spec, double t_end) {
    spec.validate();
    if (spec.lambda_a != spec.lambda_b)
        throw std::invalid_argument("evolve_analytic_balanced: requires lambda_a == lambda_b");
    if (spec.phi != 0.0)
        throw std::invalid_argument("evolve_analytic_balanced: requires phi == 0");
    if (spec.f != 1.0)
        throw std::invalid_argument("evolve_analytic_balanced: requires f == 1");
    if (t_end < 0.0) throw std::invalid_argument("evolve_analytic_balanced: negative time");

    const double lambda = spec.lambda_bar();
    const double kint = kappa_integral(spec, t_end);
    Matrix8d sigma = Matrix8d::Zero();
    for (int i = 0; i < 8; ++i) {
        const double sign = squeeze_sign[i];
        const double k_accum = sign * kint - lambda * t_end;
        sigma(i, i) = 0.5 * std::exp(2.0 * k_accum) + lambda * noise_integral(spec, t_end, sign);
    }
    return {sigma, t_end};
}

CovarianceState apply_loss(const CovarianceState& state, const std::array<double, 4>& eta) {
    for (double e : eta)
        if (!(e >= 0.0 && e <= 1.0))
            throw std::invalid_argument("apply_loss: eta must lie in [0, 1]");

    // transform to the polarization basis (twin-pair order a_h, b_v, a_v, b_h)
    const Matrix8d s = stokes::c_basis_transform_quadratures();
    Matrix8d ab = s * state.sigma * s.transpose();

    // eta arrives in mode order (a_h, a_v, b_h, b_v)
    const std::array<double, 4> eta_twin = {eta[stokes::AH], eta[stokes::BV], eta[stokes::AV],
                                            eta[stokes::BH]};
    for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) {
            const double factor =
                (m == n) ? eta_twin[m] : std::sqrt(eta_twin[m] * eta_twin[n]);
            ab.block<2, 2>(2 * m, 2 * n) *= factor;
            if (m == n)
                ab.block<2, 2>(2 * m, 2 * n) +=
                    0.5 * (1.0 - eta_twin[m]) * Eigen::Matrix2d::Identity();
        }

    return {s * ab * s.transpose(), state.t};
}

CovarianceState apply_phase_mismatch(const CovarianceState& state, double phi) {
    const double c = std::cos(phi / 2.0);
    const double sn = std::sin(phi / 2.0);
    Matrix8d r = Matrix8d::Identity();
    for (int m = 2; m < 4; ++m) {  // modes c3, c4
        r(2 * m, 2 * m) = c;
        r(2 * m, 2 * m + 1) = -sn;
        r(2 * m + 1, 2 * m) = sn;
        r(2 * m + 1, 2 * m + 1) = c;
    }
    return {r * state.sigma * r.transpose(), state.t};
}

double expect_quadratic(const CovarianceState& state, const QuadraticForm& form) {
    return 0.5 * (form.matrix * state.sigma).trace() + form.constant;
}

namespace {

cplx quartic_wick(const Matrix8d& f, const Matrix8d& g, const Matrix8cd& m) {
    // sum_{abcd} F_ab G_cd [M_ab M_cd + M_ac M_bd + M_ad M_bc];
    // the first pairing factorizes into (sum F M)(sum G M)
    cplx t2 = 0.0, t3 = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            if (f(a, b) == 0.0) continue;
            const cplx fab = f(a, b);
            for (int c = 0; c < 8; ++c)
                for (int d = 0; d < 8; ++d) {
                    if (g(c, d) == 0.0) continue;
                    t2 += fab * g(c, d) * m(a, c) * m(b, d);
                    t3 += fab * g(c, d) * m(a, d) * m(b, c);
                }
        }
    cplx fm = 0.0, gm = 0.0;
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            fm += f(a, b) * m(a, b);
            gm += g(a, b) * m(a, b);
        }
    return fm * gm + t2 + t3;
}

double checked_real(cplx value, const char* what) {
    const double scale = std::max(1.0, std::abs(value.real()));
    if (std::abs(value.imag()) > Numerics::imag_residue_tol * scale)
        throw NumericalError(std::string(what) + ": imaginary residue " +
                             std::to_string(value.imag()) +
                             " exceeds tolerance (covariance violates the uncertainty relation?)");
    return value.real();
}

Matrix8cd operator_moments(const CovarianceState& state) {
    static const Matrix8d omega = stokes::symplectic_form();
    return state.sigma.cast<cplx>() + cplx(0.0, 0.5) * omega.cast<cplx>();
}

}  // namespace

double expect_quadratic_pair(const CovarianceState& state, const QuadraticForm& f,
                             const QuadraticForm& g) {
    const Matrix8cd m = operator_moments(state);
    const cplx quartic = 0.25 * quartic_wick(f.matrix, g.matrix, m);
    const double cross = f.constant * expect_quadratic(state, {g.matrix, 0.0}) +
                         g.constant * expect_quadratic(state, {f.matrix, 0.0}) +
                         f.constant * g.constant;
    return checked_real(quartic, "expect_quadratic_pair") + cross;
}

double expect_J2(const CovarianceState& state) {
    const auto forms = stokes::jay_quadratic_forms();
    const Matrix8cd m = operator_moments(state);
    cplx total = 0.0;
    for (const auto& form : forms) total += 0.25 * quartic_wick(form.matrix, form.matrix, m);
    return checked_real(total, "expect_J2");
}

WitnessReport witness(const CovarianceState& state) {
    WitnessReport report;
    report.j2 = expect_J2(state);
    report.n = expect_quadratic(state, stokes::number_quadratic_form());
    if (report.n < Numerics::vacuous_photon_number) {
        report.ratio = 0.0;
        report.entangled = false;
        report.margin = 0.0;
        return report;
    }
    report.ratio = report.j2 / report.n;
    report.entangled = report.ratio < 0.5;
    report.margin = 0.5 - report.ratio;
    return report;
}

double uncertainty_min_eigenvalue(const CovarianceState& state) {
    const Matrix8cd m = operator_moments(state);
    Eigen::SelfAdjointEigenSolver<Matrix8cd> solver(m);
    return solver.eigenvalues().minCoeff();
}

double purity_determinant(const CovarianceState& state) {
    return (2.0 * state.sigma).determinant();
}

}  // namespace entlaser::gaussian

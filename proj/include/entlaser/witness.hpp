#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "entlaser/fock.hpp"

namespace entlaser::witness {

/// Verdict of the inseparability criterion <J^2>/<N> < 1/2.
struct Verdict {
    bool entangled = false;
    bool vacuous = false;  // <N> = 0, nothing to decide
    double ratio = 0.0;
    double margin = 0.0;  // 1/2 - ratio
};

Verdict criterion(double j2, double n);

/// Analytic bounds on the imperfections compatible with observing
/// entanglement at mean photon number n_mean. The inequalities are
/// order-of-magnitude conditions; they are reported as equalities with no
/// hidden safety factor. Both readings of the phase bound are given; the
/// correction term phi^2 <N> / 16 is the authoritative computation path.
struct ThresholdReport {
    double n_mean = 0.0;
    double delta_eta_max = 0.0;              // 2 sqrt(2) / sqrt(N)
    double delta_lambda_over_kappa_max = 0.0;  // 4 / sqrt(N)
    double delta_lambda_max = 0.0;           // kappa * 4 / sqrt(N)
    double phi_max_sqrt = 0.0;               // 4 / (sqrt(3) sqrt(N))
    double phi_max_linear = 0.0;             // 4 / (sqrt(3) N)
    double eta_critical = 1.0 / 3.0;
};

ThresholdReport thresholds(double n_mean, double kappa);

/// Two-arm loss law for the ideal pre-loss state (which has
/// <(J^A)^2> = <(J^B)^2> = -<J^A . J^B>):
///   <J^2>  -> (eta_A - eta_B)^2 j2a + 3/8 [eta_A(1-eta_A) + eta_B(1-eta_B)] n
///   <N>    -> (eta_A + eta_B)/2 n
struct LossTransformed {
    double j2;
    double n;
};

LossTransformed loss_transform_analytic(double j2a, double n, double eta_a, double eta_b);

enum class SeparableGenerator { product_fock, product_coherent_spin, mixed_product };

struct SeparableSample {
    std::string description;
    double ratio;
};

/// Draws `count` random separable two-arm states from the chosen generator
/// and evaluates <J^2>/<N> exactly on the truncated Fock space. Samples are
/// seeded individually, so results do not depend on the thread count.
std::vector<SeparableSample> sample_separable(SeparableGenerator generator, std::uint64_t seed,
                                              int count, int cutoff);

/// Ratio of the bound-attaining product family |2j, 0, 0, 2j>.
double extremal_product_ratio(int two_j, int cutoff);

}  // namespace entlaser::witness

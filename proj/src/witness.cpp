#include "entlaser/witness.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "entlaser/runtime.hpp"

namespace entlaser::witness {

Verdict criterion(double j2, double n) {
    if (n < 0.0) throw std::invalid_argument("criterion: n must be >= 0");
    Verdict v;
    if (n < Numerics::vacuous_photon_number) {
        v.vacuous = true;
        return v;
    }
    v.ratio = j2 / n;
    v.margin = 0.5 - v.ratio;
    v.entangled = v.ratio < 0.5;
    return v;
}

ThresholdReport thresholds(double n_mean, double kappa) {
    if (!(n_mean > 0.0)) throw std::invalid_argument("thresholds: n_mean must be > 0");
    if (!(kappa > 0.0)) throw std::invalid_argument("thresholds: kappa must be > 0");
    ThresholdReport r;
    r.n_mean = n_mean;
    const double root = std::sqrt(n_mean);
    r.delta_eta_max = 2.0 * std::sqrt(2.0) / root;
    r.delta_lambda_over_kappa_max = 4.0 / root;
    r.delta_lambda_max = kappa * r.delta_lambda_over_kappa_max;
    r.phi_max_sqrt = 4.0 / (std::sqrt(3.0) * root);
    r.phi_max_linear = 4.0 / (std::sqrt(3.0) * n_mean);
    return r;
}

LossTransformed loss_transform_analytic(double j2a, double n, double eta_a, double eta_b) {
    if (!(eta_a >= 0.0 && eta_a <= 1.0 && eta_b >= 0.0 && eta_b <= 1.0))
        throw std::invalid_argument("loss_transform_analytic: eta must lie in [0, 1]");
    const double delta = eta_a - eta_b;
    LossTransformed out;
    out.j2 = delta * delta * j2a +
             0.375 * (eta_a * (1.0 - eta_a) + eta_b * (1.0 - eta_b)) * n;
    out.n = 0.5 * (eta_a + eta_b) * n;
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Dense two-mode arm operators; cheap to apply per sample. Built with one
// level of cutoff headroom so that J_i products act exactly on every state
// whose occupations stay at or below sample_cutoff.
struct ArmOperators {
    int sample_cutoff;
    FockBasis basis;
    Eigen::MatrixXcd jx, jy, jz, j2, n;

    explicit ArmOperators(int cutoff) : sample_cutoff(cutoff), basis(2, cutoff + 1) {
        const SparseMatrix h = basis.annihilation(0);
        const SparseMatrix v = basis.annihilation(1);
        const SparseMatrix hd = h.adjoint();
        const SparseMatrix vd = v.adjoint();
        const SparseMatrix sjx = (hd * v + vd * h).scaled(cplx(0.5, 0.0));
        const SparseMatrix sjy = (hd * v - vd * h).scaled(cplx(0.0, -0.5));
        const SparseMatrix sjz = (basis.number(0) - basis.number(1)).scaled(cplx(0.5, 0.0));
        jx = sjx.to_dense();
        jy = sjy.to_dense();
        jz = sjz.to_dense();
        j2 = (sjx * sjx + sjy * sjy + sjz * sjz).to_dense();
        n = (basis.number(0) + basis.number(1)).to_dense();
    }
};

struct ArmExpectations {
    double jx, jy, jz, j2, n;
};

ArmExpectations arm_expectations(const ArmOperators& ops, const Eigen::VectorXcd& psi) {
    auto real_exp = [&](const Eigen::MatrixXcd& op) { return std::real(psi.dot(op * psi)); };
    return {real_exp(ops.jx), real_exp(ops.jy), real_exp(ops.jz), real_exp(ops.j2),
            real_exp(ops.n)};
}

double product_ratio(const ArmExpectations& a, const ArmExpectations& b) {
    const double j2 = a.j2 + b.j2 + 2.0 * (a.jx * b.jx + a.jy * b.jy + a.jz * b.jz);
    const double n = a.n + b.n;
    return j2 / n;
}

Eigen::VectorXcd random_arm_state(const ArmOperators& ops, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ops.basis.dim());
    for (std::int64_t i = 0; i < psi.size(); ++i) {
        if (ops.basis.occupation(i, 0) > ops.sample_cutoff ||
            ops.basis.occupation(i, 1) > ops.sample_cutoff)
            continue;
        psi[i] = cplx(normal(rng), normal(rng));
    }
    psi.normalize();
    return psi;
}

Eigen::VectorXcd fock_arm_state(const ArmOperators& ops, int nh, int nv) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ops.basis.dim());
    psi[ops.basis.index({nh, nv})] = 1.0;
    return psi;
}

// |theta, phi; n> = sum_k sqrt(binom(n,k)) cos^{n-k}(theta/2)
//                   (e^{i phi} sin(theta/2))^k |n-k, k>
Eigen::VectorXcd spin_coherent_arm_state(const ArmOperators& ops, int n, double theta,
                                         double phase) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ops.basis.dim());
    const double c = std::cos(theta / 2.0);
    const cplx s = std::polar(1.0, phase) * std::sin(theta / 2.0);
    double binom = 1.0;
    cplx s_pow = 1.0;
    for (int k = 0; k <= n; ++k) {
        psi[ops.basis.index({n - k, k})] = std::sqrt(binom) * std::pow(c, n - k) * s_pow;
        binom *= static_cast<double>(n - k) / (k + 1);
        s_pow *= s;
    }
    return psi;
}

double sample_ratio(SeparableGenerator generator, const ArmOperators& ops,
                    std::mt19937_64& rng) {
    const int cutoff = ops.sample_cutoff;
    switch (generator) {
        case SeparableGenerator::product_fock: {
            std::uniform_int_distribution<int> occ(0, cutoff);
            int na_h, na_v, nb_h, nb_v;
            do {
                na_h = occ(rng); na_v = occ(rng); nb_h = occ(rng); nb_v = occ(rng);
            } while (na_h + na_v + nb_h + nb_v == 0);
            const auto a = arm_expectations(ops, fock_arm_state(ops, na_h, na_v));
            const auto b = arm_expectations(ops, fock_arm_state(ops, nb_h, nb_v));
            return product_ratio(a, b);
        }
        case SeparableGenerator::product_coherent_spin: {
            std::uniform_int_distribution<int> photons(0, cutoff);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            int na, nb;
            do {
                na = photons(rng);
                nb = photons(rng);
            } while (na + nb == 0);
            auto draw = [&](int n) {
                const double theta = std::acos(1.0 - 2.0 * unit(rng));
                const double phase = 2.0 * std::numbers::pi * unit(rng);
                return arm_expectations(ops, spin_coherent_arm_state(ops, n, theta, phase));
            };
            return product_ratio(draw(na), draw(nb));
        }
        case SeparableGenerator::mixed_product: {
            std::uniform_int_distribution<int> components(1, 8);
            std::exponential_distribution<double> expo(1.0);
            const int k = components(rng);
            double j2_sum = 0.0, n_sum = 0.0, weight_sum = 0.0;
            std::vector<double> weights(k);
            for (int i = 0; i < k; ++i) {
                weights[i] = expo(rng);
                weight_sum += weights[i];
            }
            for (int i = 0; i < k; ++i) {
                const double p = weights[i] / weight_sum;
                const auto a = arm_expectations(ops, random_arm_state(ops, rng));
                const auto b = arm_expectations(ops, random_arm_state(ops, rng));
                j2_sum += p * (a.j2 + b.j2 + 2.0 * (a.jx * b.jx + a.jy * b.jy + a.jz * b.jz));
                n_sum += p * (a.n + b.n);
            }
            return j2_sum / n_sum;
        }
    }
    throw std::invalid_argument("sample_separable: unknown generator");
}

const char* generator_name(SeparableGenerator g) {
    switch (g) {
        case SeparableGenerator::product_fock: return "product_fock";
        case SeparableGenerator::product_coherent_spin: return "product_coherent_spin";
        case SeparableGenerator::mixed_product: return "mixed_product";
    }
    return "?";
}

}  // namespace

std::vector<SeparableSample> sample_separable(SeparableGenerator generator, std::uint64_t seed,
                                              int count, int cutoff) {
    if (count < 1) throw std::invalid_argument("sample_separable: count must be >= 1");
    const ArmOperators ops(cutoff);

    std::vector<double> ratios(count);
    const bool parallel = runtime::parallel_enabled();
#pragma omp parallel for schedule(static) if (parallel)
    for (int i = 0; i < count; ++i) {
        std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(i)));
        ratios[i] = sample_ratio(generator, ops, rng);
    }

    std::vector<SeparableSample> samples;
    samples.reserve(count);
    const std::string base = std::string(generator_name(generator)) + " seed=" +
                             std::to_string(seed) + " idx=";
    for (int i = 0; i < count; ++i)
        samples.push_back({base + std::to_string(i), ratios[i]});
    return samples;
}

double extremal_product_ratio(int two_j, int cutoff) {
    if (two_j < 1 || two_j > cutoff)
        throw std::invalid_argument("extremal_product_ratio: need 1 <= 2j <= cutoff");
    const ArmOperators ops(cutoff);
    const auto a = arm_expectations(ops, fock_arm_state(ops, two_j, 0));
    const auto b = arm_expectations(ops, fock_arm_state(ops, 0, two_j));
    return product_ratio(a, b);
}

}  // namespace entlaser::witness

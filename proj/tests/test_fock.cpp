#include <cmath>
#include <map>

#include "doctest.h"
#include "entlaser/fock.hpp"
#include "entlaser/stokes.hpp"

using namespace entlaser;
using fock::FockDensity;
using fock::FockState;

namespace {

// independent photon-number oracle: direct summation over the shell
// distribution p_n = (n+1) tanh^{2n}(tau) / cosh^4(tau), <N> = sum p_n 2n
double shell_sum_photon_number(double tau, int cutoff) {
    const double x = std::tanh(tau) * std::tanh(tau);
    const double c = std::cosh(tau);
    double total = 0.0;
    for (int n = 0; n <= cutoff; ++n)
        total += (n + 1) * std::pow(x, n) / (c * c * c * c) * 2.0 * n;
    return total;
}

FockState basis_state(const FockBasis& basis, const std::vector<int>& occ) {
    FockState s{basis, Eigen::VectorXcd::Zero(basis.dim())};
    s.amplitudes[basis.index(occ)] = 1.0;
    return s;
}

}  // namespace

TEST_CASE("ideal state at tau=0 is vacuum") {
    const auto state = fock::build_ideal_state(0.0, 4);
    CHECK(state.amplitudes[0] == cplx(1.0));
    CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("ideal state photon number") {
    const double tau = 0.5;
    const int cutoff = 12;
    const auto state = fock::build_ideal_state(tau, cutoff);
    const auto ops = stokes::build_fock_operators(cutoff);

    // matches the truncated shell sum to rounding
    CHECK(fock::expectation(state, ops.n) ==
          doctest::Approx(shell_sum_photon_number(tau, cutoff)).epsilon(1e-12));
    // and the closed form once the cutoff is adequate
    const int big = fock::cutoff_for_tau(tau, 1e-8);
    const auto refined = fock::build_ideal_state(tau, big);
    const FockBasis big_basis(4, big);
    const SparseMatrix n_op = big_basis.number(0) + big_basis.number(1) + big_basis.number(2) +
                              big_basis.number(3);
    CHECK(fock::expectation(refined, n_op) ==
          doctest::Approx(4.0 * std::sinh(tau) * std::sinh(tau)).epsilon(1e-7));
}

TEST_CASE("ideal state is a singlet") {
    const int cutoff = 10;
    const auto ops = stokes::build_fock_operators(cutoff);
    for (double tau : {0.2, 0.6}) {
        const auto state = fock::build_ideal_state(tau, cutoff);
        CHECK(std::abs(fock::expectation(state, ops.j2)) < 1e-12);
    }
}

TEST_CASE("pair-creation generator matrix elements and hermiticity") {
    const double kappa = 0.8;
    const auto h = fock::build_hamiltonian(kappa, 0.0, 1.0, 3);
    const FockBasis basis(4, 3);
    const auto elem = h.coeff(basis.index({1, 0, 0, 1}), basis.index({0, 0, 0, 0}));
    CHECK(elem.real() == doctest::Approx(0.0));
    CHECK(elem.imag() == doctest::Approx(kappa).epsilon(1e-15));
    CHECK(h.hermiticity_error() < 1e-14);
    CHECK(fock::build_hamiltonian(1.0, 0.3, 0.9, 3).hermiticity_error() < 1e-14);
}

TEST_CASE("exact evolution reproduces the closed-form state") {
    // cutoff 16 pushes the partial-shell truncation residue (the evolved
    // state populates shells n > cutoff wherever occupations still fit)
    // below the 1e-8 comparison scale
    const int cutoff = 16;
    const double tau = 0.3;
    const FockBasis basis(4, cutoff);
    const auto h = fock::build_hamiltonian(1.0, 0.0, 1.0, cutoff);
    const auto vacuum = basis_state(basis, {0, 0, 0, 0});

    SUBCASE("zero time is the identity") {
        const auto same = fock::evolve_exact(vacuum, h, 0.0);
        CHECK((same.amplitudes - vacuum.amplitudes).norm() == 0.0);
    }

    const auto evolved = fock::evolve_exact(vacuum, h, tau);
    CHECK(evolved.norm() == doctest::Approx(1.0).epsilon(1e-10));

    const auto closed = fock::build_ideal_state(tau, cutoff);
    const double overlap = std::abs(evolved.amplitudes.dot(closed.amplitudes));
    CHECK(overlap > 1.0 - 1e-8);
    CHECK((evolved.amplitudes - closed.amplitudes).norm() < 1e-8);
}

TEST_CASE("loss channel basics") {
    const int cutoff = 3;
    const FockBasis basis(4, cutoff);

    SUBCASE("eta = 1 is the identity") {
        const auto rho = FockDensity::from_state(fock::random_state(basis, 5));
        const auto out = fock::apply_loss_channel(rho, {1, 1, 1, 1});
        CHECK((out.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
    }

    SUBCASE("single photon relaxes to the textbook mixture") {
        const double eta = 0.35;
        const auto rho = FockDensity::from_state(basis_state(basis, {1, 0, 0, 0}));
        const auto out = fock::apply_loss_channel(rho, {eta, 1, 1, 1});
        const auto i1 = basis.index({1, 0, 0, 0});
        CHECK(out.rho(i1, i1).real() == doctest::Approx(eta).epsilon(1e-14));
        CHECK(out.rho(0, 0).real() == doctest::Approx(1.0 - eta).epsilon(1e-14));
        CHECK(out.trace_real() == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("strided kernel matches the explicit Kraus sum") {
        const auto rho = FockDensity::from_state(fock::random_state(basis, 17));
        const std::array<double, 4> eta = {0.9, 0.55, 0.7, 0.2};
        const auto a = fock::apply_loss_channel(rho, eta);
        const auto b = fock::apply_loss_channel_kraus(rho, eta);
        CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() < 1e-14);
        CHECK(a.hermiticity_error() < 1e-14);
    }

    SUBCASE("density matrix stays positive semidefinite") {
        const auto rho = FockDensity::from_state(fock::random_state(basis, 23));
        const auto out = fock::apply_loss_channel(rho, {0.6, 0.8, 0.3, 0.9});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.rho);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
}

TEST_CASE("balanced loss on the ideal state gives ratio 3(1-eta)/4") {
    const double tau = 0.3, eta = 0.5;
    const int cutoff = 6;
    const auto ops = stokes::build_fock_operators(cutoff);
    const auto rho = fock::apply_loss_channel(
        FockDensity::from_state(fock::build_ideal_state(tau, cutoff)), {eta, eta, eta, eta});
    const double ratio = fock::expectation(rho, ops.j2) / fock::expectation(rho, ops.n);
    CHECK(ratio == doctest::Approx(0.375).epsilon(1e-6));
}

TEST_CASE("expectation values on reference states") {
    const int cutoff = 5;
    const FockBasis basis(4, cutoff);
    const auto ops = stokes::build_fock_operators(cutoff);

    CHECK(fock::expectation(basis_state(basis, {0, 0, 0, 0}), ops.n) == 0.0);

    // n = 2 singlet shell
    FockState shell{basis, Eigen::VectorXcd::Zero(basis.dim())};
    for (int m = 0; m <= 2; ++m)
        shell.amplitudes[basis.index({2 - m, m, m, 2 - m})] = (m % 2 ? -1.0 : 1.0);
    shell.amplitudes.normalize();
    CHECK(std::abs(fock::expectation(shell, ops.j2)) < 1e-13);

    // aligned product |2>_ah |2>_bv: <J^2> = 2, N = 4, ratio exactly 1/2
    const auto aligned = basis_state(basis, {2, 0, 0, 2});
    CHECK(fock::expectation(aligned, ops.j2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(fock::expectation(aligned, ops.n) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("total-spin bound") {
    const int cutoff = 4;
    const FockBasis basis(4, cutoff);
    const auto ops = stokes::build_fock_operators(cutoff);

    const auto vac = fock::check_j_bound(basis_state(basis, {0, 0, 0, 0}), ops);
    CHECK(vac.lhs == 0.0);
    CHECK(vac.rhs == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(vac.ok);

    // one-photon spin-1/2 state saturates the bound
    const auto half = fock::check_j_bound(basis_state(basis, {1, 0, 0, 0}), ops);
    CHECK(half.lhs == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(half.rhs == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(half.ok);
}

TEST_CASE("ideal state is invariant under simultaneous polarization rotation") {
    const int cutoff = 8;
    const double tau = 0.4, theta = std::acos(-1.0) / 7.0;
    const auto ops = stokes::build_fock_operators(cutoff);
    const auto state = fock::build_ideal_state(tau, cutoff);
    // rotate both arms about the y spin axis: exp(-i theta J_y)
    const auto rotated = fock::evolve_exact(state, ops.jy, theta);

    CHECK(fock::expectation(rotated, ops.j2) ==
          doctest::Approx(fock::expectation(state, ops.j2)).epsilon(1e-10));
    CHECK(std::abs(fock::expectation(rotated, ops.j2)) < 1e-10);

    // full distribution of J_z eigenvalues (2m integer keyed)
    auto histogram = [&](const FockState& s) {
        std::map<int, double> h;
        for (std::int64_t i = 0; i < s.basis.dim(); ++i) {
            const double w = std::norm(s.amplitudes[i]);
            if (w == 0.0) continue;
            const int two_m = s.basis.occupation(i, 0) - s.basis.occupation(i, 1) +
                              s.basis.occupation(i, 2) - s.basis.occupation(i, 3);
            h[two_m] += w;
        }
        return h;
    };
    const auto before = histogram(state), after = histogram(rotated);
    for (const auto& [key, weight] : before) {
        const auto it = after.find(key);
        const double rotated_weight = it == after.end() ? 0.0 : it->second;
        CHECK(rotated_weight == doctest::Approx(weight).epsilon(1e-10));
    }
}

TEST_CASE("memory budget guard rejects oversized bases") {
    CHECK_THROWS_AS(FockBasis(4, 30, /*memory_budget_bytes=*/1 << 20), std::invalid_argument);
    CHECK_THROWS_AS(fock::build_hamiltonian(1.0, 0.0, 1.0, 30, 1 << 20), std::invalid_argument);
    CHECK_NOTHROW(FockBasis(4, 30));  // fine under the default budget
}

TEST_CASE("expectation rejects non-Hermitian operators via the residue check") {
    const FockBasis basis(4, 2);
    const auto state = fock::random_state(basis, 3);
    CHECK_THROWS_AS(fock::expectation(state, basis.annihilation(0)), NumericalError);
}

TEST_CASE("loss channel validates transmissions") {
    const FockBasis basis(4, 2);
    const auto rho = fock::FockDensity::from_state(fock::random_state(basis, 4));
    CHECK_THROWS_AS(fock::apply_loss_channel(rho, {1.2, 1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(fock::apply_loss_channel(rho, {-0.1, 1, 1, 1}), std::invalid_argument);
}

TEST_CASE("random states are reproducible and embedding preserves amplitudes") {
    const FockBasis basis(4, 3);
    const auto a = fock::random_state(basis, 99);
    const auto b = fock::random_state(basis, 99);
    CHECK((a.amplitudes - b.amplitudes).norm() == 0.0);

    const auto big = fock::embed(a, 5);
    CHECK(big.basis.cutoff() == 5);
    CHECK(big.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const FockBasis& bb = big.basis;
    CHECK(big.amplitudes[bb.index({1, 2, 3, 0})] ==
          a.amplitudes[basis.index({1, 2, 3, 0})]);
}

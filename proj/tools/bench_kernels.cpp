// Timing comparison between the OpenMP kernels and their serial reference
// implementations: sparse matrix-vector product, the per-mode loss channel
// on a density matrix, and separable-state sampling.

#include <cstdio>
#include <functional>

#include <omp.h>

#include "entlaser/fock.hpp"
#include "entlaser/runtime.hpp"
#include "entlaser/witness.hpp"

using namespace entlaser;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = omp_get_wtime();
        fn();
        best = std::min(best, omp_get_wtime() - t0);
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx\n", name, serial * 1e3, parallel * 1e3,
                serial / parallel);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    // sparse matvec on the pair-creation generator, cutoff 10
    {
        const int cutoff = 10;
        const auto h = fock::build_hamiltonian(1.0, 0.0, 1.0, cutoff);
        const FockBasis basis(4, cutoff);
        const auto psi = fock::random_state(basis, 7).amplitudes;
        Eigen::VectorXcd sink;
        const double serial = time_best_of(5, [&] {
            for (int i = 0; i < 20; ++i) sink = h.apply_serial(psi);
        });
        const double parallel = time_best_of(5, [&] {
            for (int i = 0; i < 20; ++i) sink = h.apply_parallel(psi);
        });
        report("spmv (dim 14641) x20", serial, parallel);
    }

    // per-mode loss channel on a cutoff-5 density matrix (dim 1296)
    {
        const int cutoff = 5;
        const auto rho = fock::FockDensity::from_state(fock::build_ideal_state(0.3, cutoff));
        const std::array<double, 4> eta = {0.9, 0.8, 0.85, 0.7};
        fock::FockDensity out = rho;
        const double serial = time_best_of(3, [&] {
            runtime::SerialGuard guard;
            out = fock::apply_loss_channel(rho, eta);
        });
        const double parallel = time_best_of(3, [&] { out = fock::apply_loss_channel(rho, eta); });
        report("loss channel (dim 1296)", serial, parallel);

        const auto kraus = fock::apply_loss_channel_kraus(rho, eta);
        std::printf("  strided-vs-Kraus max deviation: %.3g\n",
                    (out.rho - kraus.rho).cwiseAbs().maxCoeff());
    }

    // separable-state sampling at cutoff 4
    {
        const int count = 20000;
        std::vector<witness::SeparableSample> samples;
        const double serial = time_best_of(3, [&] {
            runtime::SerialGuard guard;
            samples = witness::sample_separable(witness::SeparableGenerator::mixed_product, 11,
                                                count, 4);
        });
        const double parallel = time_best_of(3, [&] {
            samples = witness::sample_separable(witness::SeparableGenerator::mixed_product, 11,
                                                count, 4);
        });
        report("separable sampling x20000", serial, parallel);
    }
    return 0;
}

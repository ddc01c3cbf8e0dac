// Benchmark comparing the serial reference paths (1 worker) against the
// OpenMP-parallel kernels, and asserting bitwise-identical results.

#include <chrono>
#include <cstdio>
#include <functional>

#include "qmcf/certify.hpp"
#include "qmcf/discrepancy.hpp"
#include "qmcf/gabor.hpp"
#include "qmcf/lattice.hpp"
#include "qmcf/parallel.hpp"
#include "qmcf/quadrature.hpp"

using namespace qmcf;

namespace {

double time_of(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

struct BenchCase {
    const char* name;
    std::function<double()> run;  // returns a checksum value
};

}  // namespace

int main() {
    const Lattice golden = golden_lattice();

    ShiftOptions so;
    so.grid_n = 48;
    so.refine_rounds = 2;

    SchurOptions sc;
    sc.nu_grid = 8;

    const std::vector<BenchCase> cases = {
        {"shift_discrepancy(golden, a=1/32)",
         [&] { return shift_discrepancy(golden.with_scale(1.0 / 32.0), so).estimate; }},
        {"admissibility_margin(golden, M=8000)",
         [&] { return admissibility_margin(golden, 8000).margin; }},
        {"qmc_weights_sweep(golden, a=1/8)",
         [&] {
             PointSet amb = enumerate_in_box(golden.with_scale(0.125), Rect{-4, 4, -4, 4});
             amb.sort_by_xy();
             const PointSet w = qmc_weights_sweep(amb, Rect{-2.5, 2.5, -2.5, 2.5});
             double s = 0;
             for (double x : w.weights) s += x;
             return s;
         }},
        {"schur_epsilon(golden, a=1/4)",
         [&] { return schur_epsilon(golden.with_scale(0.25), GaussianWindow(0.7071067811865476), sc).epsilon; }},
    };

    std::printf("%-40s %12s %12s %9s %s\n", "kernel", "serial [s]", "parallel [s]", "speedup",
                "bitwise");
    int mismatches = 0;
    for (const BenchCase& bc : cases) {
        set_worker_threads(1);
        double serial_val = 0.0;
        const double ts = time_of([&] { serial_val = bc.run(); });
        set_worker_threads(0);
        double par_val = 0.0;
        const double tp = time_of([&] { par_val = bc.run(); });
        const bool same = serial_val == par_val;
        if (!same) ++mismatches;
        std::printf("%-40s %12.3f %12.3f %8.2fx %s\n", bc.name, ts, tp, ts / tp,
                    same ? "ok" : "MISMATCH");
    }
    return mismatches == 0 ? 0 : 1;
}

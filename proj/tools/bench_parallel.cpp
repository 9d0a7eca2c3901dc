// Compares the serial and worker-pool paths of the embarrassingly parallel
// stages (table verification, |Z| profile scan) on identical inputs.
#include <chrono>
#include <cstdio>

#include "iso3bp/bifurcation.hpp"
#include "iso3bp/boundary.hpp"
#include "iso3bp/continuation.hpp"
#include "iso3bp/fixtures.hpp"
#include "iso3bp/parallel.hpp"
#include "iso3bp/periodic.hpp"

using namespace iso3bp;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main() {
    IntegratorConfig cfg;
    std::printf("worker pool size: %d\n", worker_count());

    {
        auto t0 = std::chrono::steady_clock::now();
        const auto serial = verify_all_rows(cfg, /*serial=*/true);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = verify_all_rows(cfg, /*serial=*/false);
        const double tp = seconds_since(t0);
        int mismatch = 0;
        for (std::size_t i = 0; i < serial.size(); ++i)
            if (serial[i].passed() != parallel[i].passed()
                || serial[i].theta != parallel[i].theta)
                ++mismatch;
        std::printf("verify-tables: serial %.2fs, parallel %.2fs, speedup %.2fx, mismatches %d\n",
                    ts, tp, ts / tp, mismatch);
    }

    {
        // short S1 stretch around the bifurcation region for the profile scan
        const Vec3 seed = fixtures::p0();
        const Vec3 dir = normalized(tangent_field(seed, BranchKind::odd_even, cfg));
        const CorrectorResult cr = newton_correct(seed, BranchKind::odd_even, dir, 1e-9, 25, cfg);
        ToleranceConfig tc;
        tc.h = 5e-3;
        tc.k = 40;
        tc.orientation = tangent_field(cr.point.position(), BranchKind::odd_even, cfg).z > 0
                             ? 1 : -1;
        StopPolicy sp;
        sp.max_pillars = 12;
        const Branch br = trace_branch(cr.point, BranchKind::odd_even, tc, sp, cfg);

        auto t0 = std::chrono::steady_clock::now();
        const auto serial = z_profile(br, cfg, 4, /*serial=*/true);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const auto parallel = z_profile(br, cfg, 4, /*serial=*/false);
        const double tp = seconds_since(t0);
        int mismatch = 0;
        for (std::size_t i = 0; i < serial.size(); ++i)
            if (serial[i].z_norm != parallel[i].z_norm) ++mismatch;
        std::printf("z-profile (%zu evals): serial %.2fs, parallel %.2fs, speedup %.2fx, "
                    "mismatches %d\n",
                    serial.size(), ts, tp, ts / tp, mismatch);
    }
    return 0;
}

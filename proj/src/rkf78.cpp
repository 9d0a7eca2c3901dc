// Reference integrator: embedded Runge-Kutta-Fehlberg 7(8), 13 stages.
// Kept free of any Taylor-path code so the two integrators can cross-check
// each other.
#include <algorithm>
#include <cmath>

#include "iso3bp/errors.hpp"
#include "iso3bp/integrator.hpp"

namespace iso3bp {
namespace {

constexpr int kStages = 13;

const double kC[kStages] = {
    0.0,       2.0 / 27.0, 1.0 / 9.0, 1.0 / 6.0, 5.0 / 12.0, 0.5,
    5.0 / 6.0, 1.0 / 6.0,  2.0 / 3.0, 1.0 / 3.0, 1.0,        0.0,
    1.0,
};

const double kA[kStages][kStages] = {
    {},
    {2.0 / 27.0},
    {1.0 / 36.0, 1.0 / 12.0},
    {1.0 / 24.0, 0.0, 1.0 / 8.0},
    {5.0 / 12.0, 0.0, -25.0 / 16.0, 25.0 / 16.0},
    {1.0 / 20.0, 0.0, 0.0, 1.0 / 4.0, 1.0 / 5.0},
    {-25.0 / 108.0, 0.0, 0.0, 125.0 / 108.0, -65.0 / 27.0, 125.0 / 54.0},
    {31.0 / 300.0, 0.0, 0.0, 0.0, 61.0 / 225.0, -2.0 / 9.0, 13.0 / 900.0},
    {2.0, 0.0, 0.0, -53.0 / 6.0, 704.0 / 45.0, -107.0 / 9.0, 67.0 / 90.0, 3.0},
    {-91.0 / 108.0, 0.0, 0.0, 23.0 / 108.0, -976.0 / 135.0, 311.0 / 54.0, -19.0 / 60.0,
     17.0 / 6.0, -1.0 / 12.0},
    {2383.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -301.0 / 82.0,
     2133.0 / 4100.0, 45.0 / 82.0, 45.0 / 164.0, 18.0 / 41.0},
    {3.0 / 205.0, 0.0, 0.0, 0.0, 0.0, -6.0 / 41.0, -3.0 / 205.0, -3.0 / 41.0, 3.0 / 41.0,
     6.0 / 41.0, 0.0},
    {-1777.0 / 4100.0, 0.0, 0.0, -341.0 / 164.0, 4496.0 / 1025.0, -289.0 / 82.0,
     2193.0 / 4100.0, 51.0 / 82.0, 33.0 / 164.0, 12.0 / 41.0, 0.0, 1.0},
};

// 8th-order weights; the 7th-order pair replaces stages 11,12 by 0,10, so the
// error estimate is 41/840 * (k0 + k10 - k11 - k12) * h.
const double kB8[kStages] = {
    0.0, 0.0, 0.0, 0.0, 0.0, 34.0 / 105.0, 9.0 / 35.0, 9.0 / 35.0,
    9.0 / 280.0, 9.0 / 280.0, 0.0, 41.0 / 840.0, 41.0 / 840.0,
};

template <std::size_t N>
using Rhs = std::array<double, N> (*)(const State<N>&, const Parameters&, double);

std::array<double, 5> rhs5(const State<5>& s, const Parameters& p, double floor) {
    return rhs_original(s, p, floor);
}

std::array<double, 15> rhs15(const State<15>& s, const Parameters& p, double floor) {
    return rhs_extended(s, p, floor);
}

template <std::size_t N>
State<N> rkf78_integrate(State<N> s, const Parameters& p, double t_end,
                         const IntegratorConfig& cfg, Rhs<N> rhs) {
    const double dir = t_end >= s.t ? 1.0 : -1.0;
    if (s.t == t_end) return s;

    double h = dir * std::min(cfg.max_step, 0.1 * std::fabs(t_end - s.t) + 1e-4);
    std::array<std::array<double, N>, kStages> k;
    State<N> stage;

    while (dir * (t_end - s.t) > 0) {
        bool is_last = false;
        if (dir * h >= std::fabs(t_end - s.t)) {
            h = t_end - s.t;
            is_last = true;
        }
        if (!is_last && std::fabs(h) < cfg.min_step)
            throw StepSizeUnderflow("reference integrator step underflow", s.t);

        bool rejected = false;
        for (int i = 0; i < kStages; ++i) {
            stage.t = s.t + kC[i] * h;
            for (std::size_t n = 0; n < N; ++n) {
                double acc = 0;
                for (int j = 0; j < i; ++j) acc += kA[i][j] * k[j][n];
                stage.x[n] = s.x[n] + h * acc;
            }
            k[i] = rhs(stage, p, cfg.collision_floor);
        }

        double err_ratio = 0;
        std::array<double, N> y_new;
        for (std::size_t n = 0; n < N; ++n) {
            double acc = 0;
            for (int i = 0; i < kStages; ++i) acc += kB8[i] * k[i][n];
            y_new[n] = s.x[n] + h * acc;
            const double err = std::fabs(h) * 41.0 / 840.0
                             * std::fabs(k[0][n] + k[10][n] - k[11][n] - k[12][n]);
            const double tol = cfg.abs_tol
                             + cfg.rel_tol * std::max(std::fabs(s.x[n]), std::fabs(y_new[n]));
            err_ratio = std::max(err_ratio, err / tol);
        }

        if (err_ratio <= 1.0) {
            s.t = is_last ? t_end : s.t + h;
            s.x = y_new;
        } else {
            rejected = true;
        }

        double factor = err_ratio > 0 ? 0.9 * std::pow(err_ratio, -1.0 / 8.0) : 4.0;
        factor = std::clamp(factor, 0.1, rejected ? 1.0 : 4.0);
        h *= factor;
        if (std::fabs(h) > cfg.max_step) h = dir * cfg.max_step;
    }
    return s;
}

} // namespace

ReducedState reference_integrate(const ReducedState& s0, const Parameters& p, double t_end,
                                 const IntegratorConfig& cfg) {
    return rkf78_integrate<5>(s0, p, t_end, cfg, &rhs5);
}

ExtendedState reference_integrate(const ExtendedState& s0, const Parameters& p, double t_end,
                                  const IntegratorConfig& cfg) {
    return rkf78_integrate<15>(s0, p, t_end, cfg, &rhs15);
}

} // namespace iso3bp

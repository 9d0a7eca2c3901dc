// Adaptive Taylor-series propagation of the reduced (5-variable) and extended
// (15-variable) systems, with optional dense output, plus an independent
// embedded Runge-Kutta-Fehlberg 7(8) reference integrator used as an oracle.
//
// Taylor coefficients are generated by algebraic recurrence on the right-hand
// side (series products plus the power recurrences for u^{-3/2}, u^{-5/2} and
// 1/R), so a single step is a degree-`order` polynomial in time. The step-size
// controller bounds the last two retained terms by the tolerance.
#ifndef ISO3BP_INTEGRATOR_HPP
#define ISO3BP_INTEGRATOR_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "iso3bp/dynamics.hpp"
#include "iso3bp/state.hpp"

namespace iso3bp {

inline constexpr int kMinTaylorOrder = 4;
inline constexpr int kMaxTaylorOrder = 40;

struct IntegratorConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int taylor_order = 20;
    double max_step = 5.0;
    double min_step = 1e-10;
    double collision_floor = kDefaultCollisionFloor;
};

// Taylor coefficients of the solution about t0: c[i][k] multiplies (t-t0)^k.
template <std::size_t N>
struct CoeffTable {
    double t0 = 0;
    int order = 0;
    std::array<std::array<double, kMaxTaylorOrder + 1>, N> c{};

    double eval_component(int i, double dt) const {
        double v = c[i][order];
        for (int k = order - 1; k >= 0; --k) v = v * dt + c[i][k];
        return v;
    }

    std::array<double, N> eval(double dt) const {
        std::array<double, N> out;
        for (std::size_t i = 0; i < N; ++i) out[i] = eval_component(static_cast<int>(i), dt);
        return out;
    }
};

CoeffTable<5> taylor_coefficients(const ReducedState& s, const Parameters& p, int order,
                                  double collision_floor = kDefaultCollisionFloor);
CoeffTable<15> taylor_coefficients(const ExtendedState& s, const Parameters& p, int order,
                                   double collision_floor = kDefaultCollisionFloor);

template <std::size_t N>
struct StepResult {
    State<N> state;
    double h_used = 0;
    double error_estimate = 0;
};

StepResult<5> step(const ReducedState& s, const Parameters& p, const IntegratorConfig& cfg);
StepResult<15> step(const ExtendedState& s, const Parameters& p, const IntegratorConfig& cfg);

// Piecewise-polynomial solution record. Evaluation maps a query time to the
// covering step and evaluates its coefficient table; backward integrations
// store the time-reflected run and undo the reflection on evaluation.
template <std::size_t N>
class DenseOutput {
public:
    struct Segment {
        double t0 = 0;
        double h = 0;
        double error_estimate = 0;
        CoeffTable<N> table;
    };

    double t_begin() const;
    double t_end() const;
    std::array<double, N> eval(double t) const;
    double eval_component(int i, double t) const;

    std::size_t step_count() const { return segments_.size(); }
    const Segment& segment(std::size_t i) const { return segments_[i]; }
    bool reflected() const { return reflected_; }

    // filled by integrate_to
    void set_reflected(bool r) { reflected_ = r; }
    void push_segment(Segment seg) { segments_.push_back(std::move(seg)); }
    void clear() { segments_.clear(); reflected_ = false; }

private:
    std::vector<Segment> segments_;
    bool reflected_ = false;
};

// Integrates to exactly t_end (final step solved for, not rounded). Backward
// targets are handled by integrating the time-reflected system. When dense is
// non-null it is cleared and filled; when min_r is non-null it receives the
// minimum of R over the sampled trajectory.
ReducedState integrate_to(const ReducedState& s0, const Parameters& p, double t_end,
                          const IntegratorConfig& cfg, DenseOutput<5>* dense = nullptr,
                          double* min_r = nullptr);
ExtendedState integrate_to(const ExtendedState& s0, const Parameters& p, double t_end,
                           const IntegratorConfig& cfg, DenseOutput<15>* dense = nullptr,
                           double* min_r = nullptr);

// Independent RKF 7(8) oracle; shares no stepping code with the Taylor path.
ReducedState reference_integrate(const ReducedState& s0, const Parameters& p, double t_end,
                                 const IntegratorConfig& cfg);
ExtendedState reference_integrate(const ExtendedState& s0, const Parameters& p, double t_end,
                                  const IntegratorConfig& cfg);

} // namespace iso3bp

#endif

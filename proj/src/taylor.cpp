// Taylor-series integrator: coefficient recurrences, adaptive stepping,
// dense output and backward integration by time reflection.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "iso3bp/errors.hpp"
#include "iso3bp/integrator.hpp"

namespace iso3bp {
namespace {

constexpr int kCap = kMaxTaylorOrder + 1;

// k-th coefficient of the product of two series.
inline double conv(const double* a, const double* b, int k) {
    double s = 0;
    for (int j = 0; j <= k; ++j) s += a[j] * b[k - j];
    return s;
}

// k-th coefficient (k >= 1) of v = u^alpha from u*v' = alpha*v*u':
//   v_k = (1/(k u_0)) * sum_{j=1..k} ((alpha+1) j - k) u_j v_{k-j}
inline double pow_coeff(const double* u, const double* v, double alpha, int k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += ((alpha + 1.0) * j - k) * u[j] * v[k - j];
    return s / (k * u[0]);
}

int clamp_order(int order) {
    return std::clamp(order, kMinTaylorOrder, kMaxTaylorOrder);
}

void check_floor_at(double f, double r, double t, double floor) {
    if (!(r > floor) || !(std::sqrt(r * r + 4.0 * f * f) > floor))
        throw CollisionError("collision floor reached during Taylor expansion", t);
}

void expand_original(const std::array<double, 5>& x0, double t0, const Parameters& par,
                     int order, double floor, CoeffTable<5>& out) {
    out.t0 = t0;
    out.order = order;
    auto& c = out.c;
    for (int i = 0; i < 5; ++i) c[i][0] = x0[i];
    check_floor_at(x0[0], x0[1], t0, floor);

    double p11[kCap], p22[kCap], u[kCap], w3[kCap], ri[kCap], r2[kCap], r3[kCap];
    const double a2 = par.a * par.a;

    for (int k = 0; k < order; ++k) {
        p11[k] = conv(c[0].data(), c[0].data(), k);
        p22[k] = conv(c[1].data(), c[1].data(), k);
        u[k] = 4.0 * p11[k] + p22[k];
        if (k == 0) {
            w3[0] = std::pow(u[0], -1.5);
            ri[0] = 1.0 / c[1][0];
        } else {
            w3[k] = pow_coeff(u, w3, -1.5, k);
            ri[k] = pow_coeff(c[1].data(), ri, -1.0, k);
        }
        r2[k] = conv(ri, ri, k);
        r3[k] = conv(r2, ri, k);

        const double f[5] = {
            c[2][k],
            c[3][k],
            -400.0 * conv(c[0].data(), w3, k),
            100.0 * a2 * r3[k] - 25.0 * r2[k] - 200.0 * conv(c[1].data(), w3, k),
            10.0 * par.a * r2[k],
        };
        for (int i = 0; i < 5; ++i) c[i][k + 1] = f[i] / (k + 1);
    }
}

void expand_extended(const std::array<double, 15>& x0, double t0, const Parameters& par,
                     int order, double floor, CoeffTable<15>& out) {
    out.t0 = t0;
    out.order = order;
    auto& c = out.c;
    for (int i = 0; i < 15; ++i) c[i][0] = x0[i];
    check_floor_at(x0[0], x0[1], t0, floor);

    double p11[kCap], p22[kCap], q12[kCap], u[kCap], w3[kCap], w5[kCap];
    double ri[kCap], r2[kCap], r3[kCap], r4[kCap];
    double in8a[kCap], in9a[kCap], in8b[kCap], in9b[kCap];
    const double a = par.a, a2 = a * a;

    for (int k = 0; k < order; ++k) {
        p11[k] = conv(c[0].data(), c[0].data(), k);
        p22[k] = conv(c[1].data(), c[1].data(), k);
        q12[k] = conv(c[0].data(), c[1].data(), k);
        u[k] = 4.0 * p11[k] + p22[k];
        if (k == 0) {
            w3[0] = std::pow(u[0], -1.5);
            w5[0] = std::pow(u[0], -2.5);
            ri[0] = 1.0 / c[1][0];
        } else {
            w3[k] = pow_coeff(u, w3, -1.5, k);
            w5[k] = pow_coeff(u, w5, -2.5, k);
            ri[k] = pow_coeff(c[1].data(), ri, -1.0, k);
        }
        r2[k] = conv(ri, ri, k);
        r3[k] = conv(r2, ri, k);
        r4[k] = conv(r2, r2, k);

        double f[15];
        f[0] = c[2][k];
        f[1] = c[3][k];
        f[2] = -400.0 * conv(c[0].data(), w3, k);
        f[3] = 100.0 * a2 * r3[k] - 25.0 * r2[k] - 200.0 * conv(c[1].data(), w3, k);
        f[4] = 10.0 * a * r2[k];

        // sensitivity blocks: pf/pr are dF/dp, dR/dp series (p = a then b)
        for (int blk = 0; blk < 2; ++blk) {
            const int off = blk == 0 ? kSensA : kSensB;
            const double* pf = c[off + kF].data();
            const double* pr = c[off + kR].data();
            double* in8 = blk == 0 ? in8a : in8b;
            double* in9 = blk == 0 ? in9a : in9b;
            in8[k] = 3200.0 * conv(pf, p11, k) + 1200.0 * conv(pr, q12, k)
                   - 400.0 * conv(pf, p22, k);
            in9[k] = 2400.0 * conv(pf, q12, k) + 600.0 * conv(pr, p22, k);
            const double pr_r3 = conv(pr, r3, k);
            f[off + kF] = c[off + kFdot][k];
            f[off + kR] = c[off + kRdot][k];
            f[off + kFdot] = conv(in8, w5, k);
            f[off + kRdot] = -300.0 * a2 * conv(pr, r4, k) + conv(in9, w5, k)
                           + 50.0 * pr_r3 - 200.0 * conv(pr, w3, k);
            f[off + kTheta] = -20.0 * a * pr_r3;
        }
        f[kSensA + kRdot] += 200.0 * a * r3[k];
        f[kSensA + kTheta] += 10.0 * r2[k];

        for (int i = 0; i < 15; ++i) c[i][k + 1] = f[i] / (k + 1);
    }
}

template <std::size_t N>
void expand(const std::array<double, N>& x0, double t0, const Parameters& p, int order,
            double floor, CoeffTable<N>& out) {
    if constexpr (N == 5)
        expand_original(x0, t0, p, order, floor, out);
    else
        expand_extended(x0, t0, p, order, floor, out);
}

template <std::size_t N>
double inf_norm_order(const CoeffTable<N>& tb, int k) {
    double m = 0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::fabs(tb.c[i][k]));
    return m;
}

// Step size bounding the last two retained terms by tol.
template <std::size_t N>
double propose_step(const CoeffTable<N>& tb, double tol, const IntegratorConfig& cfg) {
    const int p = tb.order;
    const double np = inf_norm_order(tb, p);
    const double npm1 = inf_norm_order(tb, p - 1);
    double h = cfg.max_step;
    if (np > 0) h = std::min(h, std::pow(tol / np, 1.0 / p));
    if (npm1 > 0) h = std::min(h, std::pow(tol / npm1, 1.0 / (p - 1)));
    return 0.85 * std::min(h, cfg.max_step / 0.85);
}

template <std::size_t N>
double tail_estimate(const CoeffTable<N>& tb, double h) {
    const int p = tb.order;
    return inf_norm_order(tb, p) * std::pow(h, p)
         + inf_norm_order(tb, p - 1) * std::pow(h, p - 1);
}

template <std::size_t N>
double state_scale(const std::array<double, N>& x) {
    double m = 0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

// Samples R over a step polynomial; updates running minimum and enforces the floor.
template <std::size_t N>
void scan_r_over_step(const CoeffTable<N>& tb, double h, double floor, double* min_r) {
    constexpr int kSamples = 8;
    for (int j = 1; j <= kSamples; ++j) {
        const double dt = h * j / kSamples;
        const double r = tb.eval_component(kR, dt);
        const double f = tb.eval_component(kF, dt);
        if (!(r > floor) || !(std::sqrt(r * r + 4.0 * f * f) > floor))
            throw CollisionError("collision floor reached inside step", tb.t0 + dt);
        if (min_r && r < *min_r) *min_r = r;
    }
}

// Reflection t -> -t: velocities and Theta flip sign in every 5-block.
template <std::size_t N>
State<N> reflect(const State<N>& s) {
    State<N> out;
    out.t = -s.t;
    for (std::size_t i = 0; i < N; ++i) {
        const int slot = static_cast<int>(i % 5);
        const bool flip = slot == kFdot || slot == kRdot || slot == kTheta;
        out.x[i] = flip ? -s.x[i] : s.x[i];
    }
    return out;
}

template <std::size_t N>
StepResult<N> step_impl(const State<N>& s, const Parameters& p, const IntegratorConfig& cfg) {
    const int order = clamp_order(cfg.taylor_order);
    CoeffTable<N> tb;
    expand<N>(s.x, s.t, p, order, cfg.collision_floor, tb);
    const double tol = std::max(cfg.abs_tol, cfg.rel_tol * state_scale<N>(s.x));
    double h = propose_step(tb, tol, cfg);
    if (h < cfg.min_step)
        throw StepSizeUnderflow("required step below min_step", s.t);
    StepResult<N> out;
    out.state.t = s.t + h;
    out.state.x = tb.eval(h);
    out.h_used = h;
    out.error_estimate = tail_estimate(tb, h);
    return out;
}

template <std::size_t N>
State<N> integrate_forward(State<N> s, const Parameters& p, double t_end,
                           const IntegratorConfig& cfg, DenseOutput<N>* dense, double* min_r) {
    const int order = clamp_order(cfg.taylor_order);
    if (min_r) *min_r = std::min(*min_r, s.x[kR]);
    while (s.t < t_end) {
        CoeffTable<N> tb;
        expand<N>(s.x, s.t, p, order, cfg.collision_floor, tb);
        const double tol = std::max(cfg.abs_tol, cfg.rel_tol * state_scale<N>(s.x));
        double h = propose_step(tb, tol, cfg);
        const double remaining = t_end - s.t;
        bool last = false;
        if (h >= remaining) {
            h = remaining;
            last = true;
        } else if (h < cfg.min_step) {
            throw StepSizeUnderflow("required step below min_step", s.t);
        }
        scan_r_over_step(tb, h, cfg.collision_floor, min_r);
        s.x = tb.eval(h);
        s.t = last ? t_end : s.t + h;
        if (dense)
            dense->push_segment({tb.t0, h, tail_estimate(tb, h), tb});
    }
    return s;
}

template <std::size_t N>
State<N> integrate_impl(const State<N>& s0, const Parameters& p, double t_end,
                        const IntegratorConfig& cfg, DenseOutput<N>* dense, double* min_r) {
    double local_min = s0.x[kR];
    if (dense) dense->clear();
    State<N> result;
    if (t_end >= s0.t) {
        result = integrate_forward<N>(s0, p, t_end, cfg, dense, &local_min);
    } else {
        result = reflect(integrate_forward<N>(reflect(s0), p, -t_end, cfg, dense, &local_min));
        if (dense) dense->set_reflected(true);
    }
    if (min_r) *min_r = local_min;
    return result;
}

} // namespace

CoeffTable<5> taylor_coefficients(const ReducedState& s, const Parameters& p, int order,
                                  double collision_floor) {
    CoeffTable<5> tb;
    expand_original(s.x, s.t, p, clamp_order(order), collision_floor, tb);
    return tb;
}

CoeffTable<15> taylor_coefficients(const ExtendedState& s, const Parameters& p, int order,
                                   double collision_floor) {
    CoeffTable<15> tb;
    expand_extended(s.x, s.t, p, clamp_order(order), collision_floor, tb);
    return tb;
}

StepResult<5> step(const ReducedState& s, const Parameters& p, const IntegratorConfig& cfg) {
    return step_impl<5>(s, p, cfg);
}

StepResult<15> step(const ExtendedState& s, const Parameters& p, const IntegratorConfig& cfg) {
    return step_impl<15>(s, p, cfg);
}

template <std::size_t N>
double DenseOutput<N>::t_begin() const {
    const double lo = segments_.front().t0;
    const double hi = segments_.back().t0 + segments_.back().h;
    return reflected_ ? -hi : lo;
}

template <std::size_t N>
double DenseOutput<N>::t_end() const {
    const double lo = segments_.front().t0;
    const double hi = segments_.back().t0 + segments_.back().h;
    return reflected_ ? -lo : hi;
}

template <std::size_t N>
std::array<double, N> DenseOutput<N>::eval(double t) const {
    if (segments_.empty()) throw Error("dense output is empty");
    double tq = reflected_ ? -t : t;
    const double lo = segments_.front().t0;
    const double hi = segments_.back().t0 + segments_.back().h;
    const double slack = 1e-9 * (1.0 + std::fabs(hi - lo));
    if (tq < lo - slack || tq > hi + slack) throw Error("time outside dense output span");
    tq = std::clamp(tq, lo, hi);
    // last segment with t0 <= tq
    std::size_t idx = 0;
    {
        std::size_t a = 0, b = segments_.size();
        while (b - a > 1) {
            const std::size_t m = (a + b) / 2;
            if (segments_[m].t0 <= tq) a = m; else b = m;
        }
        idx = a;
    }
    auto v = segments_[idx].table.eval(tq - segments_[idx].t0);
    if (reflected_) {
        for (std::size_t i = 0; i < N; ++i) {
            const int slot = static_cast<int>(i % 5);
            if (slot == kFdot || slot == kRdot || slot == kTheta) v[i] = -v[i];
        }
    }
    return v;
}

template <std::size_t N>
double DenseOutput<N>::eval_component(int i, double t) const {
    return eval(t)[i];
}

template class DenseOutput<5>;
template class DenseOutput<15>;

ReducedState integrate_to(const ReducedState& s0, const Parameters& p, double t_end,
                          const IntegratorConfig& cfg, DenseOutput<5>* dense, double* min_r) {
    return integrate_impl<5>(s0, p, t_end, cfg, dense, min_r);
}

ExtendedState integrate_to(const ExtendedState& s0, const Parameters& p, double t_end,
                           const IntegratorConfig& cfg, DenseOutput<15>* dense, double* min_r) {
    return integrate_impl<15>(s0, p, t_end, cfg, dense, min_r);
}

} // namespace iso3bp

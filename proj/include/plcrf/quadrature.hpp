#pragma once

// Adaptive Gauss-Kronrod (G7, K15) quadrature used by the oracle integrals.
// Semi-infinite ranges are mapped to [0, 1) via t = a + u/(1-u) before
// adaptive refinement.  Every result carries an error estimate; callers
// accept a value only when the estimate meets the requested tolerance.

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace plcrf::quadrature {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    int max_subdivisions = 4000;
    double tail_cutoff_multiplier = 40.0;  // upper limit = multiplier x distribution mean
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// QUADPACK dqk15 nodes and weights (positive half; node 7 is the midpoint).
inline constexpr double xgk[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
inline constexpr double wgk[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
inline constexpr double wg[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
inline Segment gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    const double fc = f(c);
    fk = wgk[7] * fc;
    fg = wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double f1 = f(c - h * xgk[i]);
        const double f2 = f(c + h * xgk[i]);
        fk += wgk[i] * (f1 + f2);
        if (i % 2 == 1) fg += wg[i / 2] * (f1 + f2);
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.value = fk * h;
    s.error = std::abs((fk - fg) * h);
    return s;
}

} // namespace detail

template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    QuadResult res;
    if (a == b) { res.converged = true; return res; }
    std::priority_queue<detail::Segment> heap;
    detail::Segment s0 = detail::gk15(f, a, b);
    res.evaluations = 15;
    double total = s0.value, err = s0.error;
    heap.push(s0);
    int splits = 0;
    while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)) &&
           splits < cfg.max_subdivisions) {
        detail::Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { heap.push(worst); break; }  // width exhausted
        detail::Segment l = detail::gk15(f, worst.a, mid);
        detail::Segment r = detail::gk15(f, mid, worst.b);
        res.evaluations += 30;
        total += l.value + r.value - worst.value;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++splits;
    }
    res.value = total;
    res.error_estimate = err;
    res.converged = err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total));
    return res;
}

template <class F>
QuadResult integrate_semi_infinite(F&& f, double a, const QuadratureConfig& cfg = {}) {
    auto mapped = [&](double u) {
        const double omu = 1.0 - u;
        const double t = a + u / omu;
        return f(t) / (omu * omu);
    };
    // stop just short of u = 1; the residual window is transparent to the
    // exponential-tailed integrands this serves
    return integrate(mapped, 0.0, 1.0 - 1e-14, cfg);
}

template <class F>
double integrate_or_throw(F&& f, double a, double b, const QuadratureConfig& cfg = {},
                          const char* what = "quadrature") {
    QuadResult r = integrate(f, a, b, cfg);
    if (!r.converged)
        throw std::runtime_error(std::string(what) + ": quadrature did not converge (error "
                                 + std::to_string(r.error_estimate) + ")");
    return r.value;
}

template <class F>
double integrate_semi_infinite_or_throw(F&& f, double a, const QuadratureConfig& cfg = {},
                                        const char* what = "quadrature") {
    QuadResult r = integrate_semi_infinite(f, a, cfg);
    if (!r.converged)
        throw std::runtime_error(std::string(what) + ": quadrature did not converge (error "
                                 + std::to_string(r.error_estimate) + ")");
    return r.value;
}

} // namespace plcrf::quadrature

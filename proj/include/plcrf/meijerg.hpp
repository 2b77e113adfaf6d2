#pragma once

// Meijer G-function evaluation.
//
// Univariate: Mellin-Barnes contour quadrature along a vertical line
// Re s = sigma separating the ascending poles (of Gamma(b_j - s), j < m) from
// the descending ones (of Gamma(1 - a_j + s), j < n).  On such a line the
// integrand is analytic in a strip and decays exponentially, so the
// trapezoidal rule converges spectrally; the step is halved until two
// evaluations agree.  Exact reductions (exponential, lower incomplete gamma,
// Bessel K) are dispatched first where the parameter pattern allows.
//
// Bivariate: the two-variable extension
//   G = (1/2*pi*i)^2 Int Int phi_outer(s+t) phi_first(s) phi_second(t) x^s y^t ds dt
// evaluated as a tensor trapezoid over two vertical lines, restricted to the
// two group shapes the end-to-end capacity expressions need.

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "specfun.hpp"

namespace plcrf::meijerg {

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct Precision {
    double rel_tol = 1e-10;
    int max_terms = 256;       // series/recurrence term budgets in callers
    int max_nodes = 400000;    // contour node budget
    static Precision univariate() { return {1e-10, 256, 400000}; }
    static Precision bivariate() { return {1e-6, 256, 4000000}; }
};

struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;  // p upper parameters
    std::vector<double> b;  // q lower parameters
    double x = 1.0;

    int p() const { return static_cast<int>(a.size()); }
    int q() const { return static_cast<int>(b.size()); }

    void validate() const {
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::domain_error("MeijerGSpec: argument x must be positive and finite");
        if (m < 0 || n < 0 || m > q() || n > p())
            throw std::domain_error("MeijerGSpec: requires 0 <= m <= q and 0 <= n <= p");
        for (double v : a)
            if (!std::isfinite(v)) throw std::domain_error("MeijerGSpec: non-finite parameter");
        for (double v : b)
            if (!std::isfinite(v)) throw std::domain_error("MeijerGSpec: non-finite parameter");
    }
};

namespace detail {

using cld = std::complex<long double>;
using specfun::detail::log_gamma;

// log of the Mellin kernel Phi(s) for one parameter group.
inline cld log_kernel(const MeijerGSpec& g, const cld& s) {
    cld acc{0.0L, 0.0L};
    for (int j = 0; j < g.m; ++j) acc += log_gamma(cld{(long double)g.b[j], 0.0L} - s);
    for (int j = 0; j < g.n; ++j) acc += log_gamma(1.0L - (long double)g.a[j] + s);
    for (int j = g.m; j < g.q(); ++j) acc -= log_gamma(1.0L - (long double)g.b[j] + s);
    for (int j = g.n; j < g.p(); ++j) acc -= log_gamma(cld{(long double)g.a[j], 0.0L} - s);
    return acc;
}

// exponential decay rate of |Phi| along the vertical line
inline double decay_rate(int m, int n, int p, int q) {
    return 0.5 * M_PI * (2.0 * (m + n) - p - q);
}

struct SigmaWindow {
    double lo, hi;  // admissible open interval for sigma
};

inline SigmaWindow sigma_window(const MeijerGSpec& g) {
    double hi = std::numeric_limits<double>::infinity();
    double lo = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.m; ++j) hi = std::min(hi, g.b[j]);
    for (int j = 0; j < g.n; ++j) lo = std::max(lo, g.a[j] - 1.0);
    if (!std::isfinite(lo) && !std::isfinite(hi)) { lo = -15.0; hi = 15.0; }
    else if (!std::isfinite(lo)) lo = hi - 30.0;
    else if (!std::isfinite(hi)) hi = lo + 30.0;
    return {lo, hi};
}

// pick sigma in the window minimizing the integrand magnitude at t = 0.5;
// one-sided-unbounded windows are probed geometrically so the saddle can sit
// far from the finite wall (for example near -x for the exp kernel).
inline double choose_sigma(const MeijerGSpec& g, double lnx) {
    double raw_hi = std::numeric_limits<double>::infinity();
    double raw_lo = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.m; ++j) raw_hi = std::min(raw_hi, g.b[j]);
    for (int j = 0; j < g.n; ++j) raw_lo = std::max(raw_lo, g.a[j] - 1.0);
    if (std::isfinite(raw_lo) && std::isfinite(raw_hi) && !(raw_hi - raw_lo > 0.05))
        throw NumericalError("meijer_g: no separating vertical contour exists for these parameters");

    auto energy = [&](double sig) {
        return (double)log_kernel(g, cld{(long double)sig, 0.5L}).real() + sig * lnx;
    };
    double lo = raw_lo, hi = raw_hi;
    if (!std::isfinite(lo) && !std::isfinite(hi)) { lo = -15.0; hi = 15.0; }
    else if (!std::isfinite(lo)) {
        lo = hi - 2.0;
        double prev = energy(hi - std::min(0.3, 1.0));
        for (double span = 2.0; span <= 65536.0; span *= 2.0) {
            double e = energy(hi - span);
            if (e >= prev) break;
            prev = e;
            lo = hi - 2.0 * span;
        }
    } else if (!std::isfinite(hi)) {
        hi = lo + 2.0;
        double prev = energy(lo + std::min(0.3, 1.0));
        for (double span = 2.0; span <= 65536.0; span *= 2.0) {
            double e = energy(lo + span);
            if (e >= prev) break;
            prev = e;
            hi = lo + 2.0 * span;
        }
    }

    const double margin = std::min(0.3, 0.3 * (hi - lo));
    double best = 0.5 * (lo + hi), best_e = std::numeric_limits<double>::infinity();
    const int npts = 65;
    for (int i = 0; i < npts; ++i) {
        double sig = (lo + margin) + (hi - lo - 2 * margin) * i / (npts - 1.0);
        double e = energy(sig);
        if (e < best_e) { best_e = e; best = sig; }
    }
    // local refinement around the coarse optimum, keeping the hard margin so
    // the analyticity strip of the trapezoid stays wide
    double step = (hi - lo - 2 * margin) / (npts - 1.0);
    for (int pass = 0; pass < 3 && step > 1e-3; ++pass, step *= 0.2) {
        for (int i = -4; i <= 4; ++i) {
            double sig = best + i * step * 0.25;
            if (sig <= raw_lo + margin || sig >= raw_hi - margin) continue;
            double e = energy(sig);
            if (e < best_e) { best_e = e; best = sig; }
        }
    }
    return best;
}

inline double contour_integral(const MeijerGSpec& g, const Precision& prec) {
    const double rate = decay_rate(g.m, g.n, g.p(), g.q());
    if (!(rate > 0.0))
        throw NumericalError("meijer_g: Mellin-Barnes line integral does not converge for this class");
    const double lnx = std::log(g.x);
    const double sigma = choose_sigma(g, lnx);
    auto integrand = [&](double t) -> cld {
        cld s{(long double)sigma, (long double)t};
        return std::exp(log_kernel(g, s) + s * (long double)lnx);
    };

    // level 0 fixes the truncation length from the integrand envelope; each
    // halving then adds only the odd nodes of the finer grid
    const double h0 = 0.3;
    long double acc = 0.5L * integrand(0.0).real();
    long double abs_acc = std::abs(acc);
    long double peak = std::max(abs_acc, (long double)1e-300L);
    int n0 = 1;
    {
        int quiet = 0;
        for (; n0 < prec.max_nodes; ++n0) {
            cld v = integrand(n0 * h0);
            acc += v.real();
            long double m = std::abs(v);
            abs_acc += m;
            peak = std::max(peak, m);
            if (m < 1e-17L * peak && n0 * h0 > 3.0) {
                if (++quiet >= 10) break;
            } else {
                quiet = 0;
            }
        }
    }
    double h = h0;
    double prev = (double)(acc * (long double)h / M_PI);
    for (int level = 0; level < 6; ++level) {
        h *= 0.5;
        const int n_new = 2 * n0;  // odd multiples of the new step
        for (int j = 1; j < n_new; j += 2) {
            cld v = integrand(j * h);
            acc += v.real();
            abs_acc += std::abs(v);
        }
        n0 = n_new;
        double value = (double)(acc * (long double)h / M_PI);
        double scale = std::max(std::abs(value), std::abs(prev));
        if (scale < 1e-290) return 0.0;  // benign underflow of the whole integral
        if (std::abs(value - prev) <= prec.rel_tol * scale) {
            double cond = (double)(abs_acc / std::max(std::abs(acc), (long double)1e-300L));
            if (cond * 1e-18 > 10.0 * prec.rel_tol) {
                std::ostringstream os;
                os << "meijer_g: contour quadrature ill-conditioned (cancellation " << cond
                   << ", sigma " << sigma << ", x " << g.x << ")";
                throw NumericalError(os.str());
            }
            return value;
        }
        prev = value;
    }
    std::ostringstream os;
    os << "meijer_g: contour quadrature did not converge (sigma " << sigma << ", x " << g.x
       << ", last " << prev << ")";
    throw NumericalError(os.str());
}

inline bool near_integer(double v) { return std::abs(v - std::round(v)) < 1e-12; }

} // namespace detail

// Forced Mellin-Barnes evaluation (no reduction dispatch); exposed so the
// reduction identities can be tested against the contour independently.
inline double meijer_g_contour(const MeijerGSpec& g, const Precision& prec = Precision::univariate()) {
    g.validate();
    return detail::contour_integral(g, prec);
}

inline double meijer_g(const MeijerGSpec& g, const Precision& prec = Precision::univariate()) {
    g.validate();
    const int p = g.p(), q = g.q();
    // exp(-x) = G^{1,0}_{0,1}[x | -; b]
    if (g.m == 1 && g.n == 0 && p == 0 && q == 1)
        return std::exp(g.b[0] * std::log(g.x) - g.x);
    // lower incomplete gamma: G^{1,1}_{1,2}[x | 1; (b1, 0)] = igamma_lower(b1, x)
    if (g.m == 1 && g.n == 1 && p == 1 && q == 2 && g.a[0] == 1.0 && g.b[1] == 0.0 && g.b[0] > 0.0)
        return std::exp(specfun::ln_gamma(g.b[0])) * specfun::lower_inc_gamma_reg(g.b[0], g.x);
    // Bessel K: G^{2,0}_{0,2}[x | -; (b1, b2)] = 2 x^{(b1+b2)/2} K_{b1-b2}(2 sqrt(x))
    if (g.m == 2 && g.n == 0 && p == 0 && q == 2 && detail::near_integer(g.b[0] - g.b[1])) {
        int ord = static_cast<int>(std::llround(g.b[0] - g.b[1]));
        double lg = std::log(2.0) + 0.5 * (g.b[0] + g.b[1]) * std::log(g.x)
                  + specfun::ln_bessel_k(ord, 2.0 * std::sqrt(g.x));
        return std::exp(lg);
    }
    return detail::contour_integral(g, prec);
}

// ---------------------------------------------------------------------------
// Two-variable extension
// ---------------------------------------------------------------------------

struct BivariateMeijerGSpec {
    struct Group {
        int m = 0;
        int n = 0;
        std::vector<double> a, b;
        int p() const { return static_cast<int>(a.size()); }
        int q() const { return static_cast<int>(b.size()); }
    };
    Group outer;    // kernel of s + t
    Group first;    // kernel of s, pairs with x
    Group second;   // kernel of t, pairs with y
    double x = 1.0;
    double y = 1.0;

    void validate() const {
        if (!(x > 0.0) || !(y > 0.0))
            throw std::domain_error("BivariateMeijerGSpec: arguments must be positive");
        auto shape = [](const Group& g, int m, int n, int p, int q) {
            return g.m == m && g.n == n && g.p() == p && g.q() == q;
        };
        bool outer_ok = shape(outer, 0, 1, 1, 0);
        bool first_ok = shape(first, 1, 2, 2, 2);
        bool second_ok = shape(second, 1, 1, 1, 2) || shape(second, 2, 0, 0, 2);
        if (!(outer_ok && first_ok && second_ok))
            throw std::domain_error(
                "BivariateMeijerGSpec: only the capacity-expression group shapes "
                "(0,1;1,0), (1,2;2,2), and (1,1;1,2)/(2,0;0,2) are supported");
    }
};

namespace detail {

inline cld log_kernel_group(const BivariateMeijerGSpec::Group& g, const cld& s) {
    MeijerGSpec tmp;  // reuse the univariate kernel assembly
    tmp.m = g.m;
    tmp.n = g.n;
    tmp.a = g.a;
    tmp.b = g.b;
    tmp.x = 1.0;
    return log_kernel(tmp, s);
}

inline SigmaWindow group_window(const BivariateMeijerGSpec::Group& g) {
    MeijerGSpec tmp;
    tmp.m = g.m;
    tmp.n = g.n;
    tmp.a = g.a;
    tmp.b = g.b;
    tmp.x = 1.0;
    return sigma_window(tmp);
}

struct BivContours {
    double s1 = 0.0, s2 = 0.0;
};

inline BivContours choose_bivariate_contours(const BivariateMeijerGSpec& g) {
    SigmaWindow w1 = group_window(g.first);
    SigmaWindow w2 = group_window(g.second);
    // outer group (m=0, n=1): descending poles at s+t = a_out - 1 - nu
    const double wall = g.outer.a[0] - 1.0;
    const double lnx = std::log(g.x), lny = std::log(g.y);
    const double m1 = std::min(0.3, 0.3 * (w1.hi - w1.lo));
    const double m2 = std::min(0.3, 0.3 * (w2.hi - w2.lo));
    double best1 = 0, best2 = 0, best_e = std::numeric_limits<double>::infinity();
    const int npts = 17;
    for (int i = 0; i < npts; ++i) {
        double s1 = (w1.lo + m1) + (w1.hi - w1.lo - 2 * m1) * i / (npts - 1.0);
        for (int j = 0; j < npts; ++j) {
            double s2 = (w2.lo + m2) + (w2.hi - w2.lo - 2 * m2) * j / (npts - 1.0);
            if (s1 + s2 < wall + 0.3) continue;
            double e = (double)(log_kernel_group(g.outer, cld{(long double)(s1 + s2), 0.5L}).real()
                                + log_kernel_group(g.first, cld{(long double)s1, 0.5L}).real()
                                + log_kernel_group(g.second, cld{(long double)s2, 0.5L}).real())
                       + s1 * lnx + s2 * lny;
            if (e < best_e) { best_e = e; best1 = s1; best2 = s2; }
        }
    }
    if (!std::isfinite(best_e))
        throw NumericalError("bivariate_meijer_g: no admissible contour pair found");
    return {best1, best2};
}

struct BivPass {
    double value = 0.0;
    double cond = 0.0;
    double ring = 0.0;  // largest boundary-node magnitude relative to the peak
};

inline BivPass bivariate_pass(const BivariateMeijerGSpec& g, const BivContours& sc, double h,
                              double T1, double T2) {
    const long double lnx = std::log((long double)g.x);
    const long double lny = std::log((long double)g.y);
    const int N1 = std::max(8, (int)std::ceil(T1 / h));
    const int N2 = std::max(8, (int)std::ceil(T2 / h));

    // axis arrays: A1[j] = phi_first(s) x^s for t1 = j h (j >= 0);
    //              A2[j] = phi_second(t) y^t for t2 = (j - N2) h
    std::vector<cld> A1(N1 + 1), A2(2 * N2 + 1);
    for (int j = 0; j <= N1; ++j) {
        cld s{(long double)sc.s1, (long double)(j * h)};
        A1[j] = std::exp(log_kernel_group(g.first, s) + s * lnx);
    }
    for (int j = -N2; j <= N2; ++j) {
        cld t{(long double)sc.s2, (long double)(j * h)};
        A2[j + N2] = std::exp(log_kernel_group(g.second, t) + t * lny);
    }
    const long double a_out = (long double)g.outer.a[0];
    const long double ss = (long double)(sc.s1 + sc.s2);

    // the outer kernel depends on j1 + j2 only; precompute it on that line
    std::vector<cld> PHI(N1 + 2 * N2 + 1);
    for (int j = -N2; j <= N1 + N2; ++j)
        PHI[j + N2] = std::exp(log_gamma(1.0L - a_out + cld{ss, (long double)(j * h)}));

    long double acc = 0.0L, abs_acc = 0.0L, peak = 1e-300L, ring = 0.0L;
    for (int j1 = 0; j1 <= N1; ++j1) {
        const cld& f1 = A1[j1];
        const long double w1 = (j1 == 0) ? 0.5L : 1.0L;  // symmetry halves the j1 = 0 row
        for (int j2 = -N2; j2 <= N2; ++j2) {
            cld v = PHI[j1 + j2 + N2] * f1 * A2[j2 + N2];
            acc += w1 * v.real();
            long double m = std::abs(v);
            abs_acc += w1 * m;
            peak = std::max(peak, m);
            if (j1 == N1 || j2 == -N2 || j2 == N2) ring = std::max(ring, m);
        }
    }
    BivPass r;
    // full-plane integral = 2 * (half-plane sum with j1 = 0 halved)
    r.value = (double)(2.0L * acc * (long double)(h * h) / (4.0L * M_PI * M_PI));
    r.cond = (double)(abs_acc / std::max(std::abs(acc), 1e-300L));
    r.ring = (double)(ring / peak);
    return r;
}

} // namespace detail

inline double bivariate_meijer_g(const BivariateMeijerGSpec& g,
                                 const Precision& prec = Precision::bivariate()) {
    g.validate();
    detail::BivContours sc = detail::choose_bivariate_contours(g);

    // initial truncation from axis slices (outer kernel included on each axis)
    auto slice_extent = [&](bool axis1) {
        double T = 4.0;
        double peak = -std::numeric_limits<double>::infinity();
        const double lnz = axis1 ? std::log(g.x) : std::log(g.y);
        for (double t = 0.0; t < 600.0; t += 0.5) {
            detail::cld sv = axis1 ? detail::cld{(long double)sc.s1, (long double)t}
                                   : detail::cld{(long double)sc.s2, (long double)t};
            detail::cld wv{(long double)(sc.s1 + sc.s2), (long double)t};
            double e = (double)(detail::log_kernel_group(axis1 ? g.first : g.second, sv).real()
                                + detail::log_kernel_group(g.outer, wv).real())
                       + (axis1 ? sc.s1 : sc.s2) * lnz;
            peak = std::max(peak, e);
            if (e < peak - 42.0) { T = t; break; }
            T = t;
        }
        return T + 2.0;
    };
    double T1 = slice_extent(true);
    double T2 = slice_extent(false);

    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int attempt = 0; attempt < 3; ++attempt) {
        prev = std::numeric_limits<double>::quiet_NaN();
        for (double h : {0.25, 0.125, 0.0625, 0.03125}) {
            if ((2.0 * T2 / h + 1) * (T1 / h + 1) > prec.max_nodes) break;
            detail::BivPass r = detail::bivariate_pass(g, sc, h, T1, T2);
            if (std::isfinite(prev)) {
                double scale = std::max(std::abs(r.value), std::abs(prev));
                if (scale < 1e-290) return 0.0;
                if (std::abs(r.value - prev) <= prec.rel_tol * scale) {
                    if (r.ring > 1e-12) break;  // under-truncated; enlarge the rectangle
                    if (r.cond * 1e-18 > 10.0 * prec.rel_tol)
                        throw NumericalError("bivariate_meijer_g: contour quadrature ill-conditioned");
                    return r.value;
                }
            }
            prev = r.value;
        }
        T1 *= 1.5;
        T2 *= 1.5;
    }
    throw NumericalError("bivariate_meijer_g: contour quadrature did not converge");
}

} // namespace plcrf::meijerg

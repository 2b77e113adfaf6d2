#pragma once

// Closed-form link metrics: outage probability, average BER (DBPSK), and
// average channel capacity for decode-and-forward and fixed-gain
// amplify-and-forward relaying, together with the end-to-end AF SNR pdf/cdf,
// high-SNR asymptotics, and Jensen upper bounds.
//
// All sums run in log space with the terms' Poissonian envelopes used to stop
// the truncation index early; every expression here is pinned against the
// defining-integral oracles in oracles.hpp by the test suite.

#include <cmath>
#include <map>
#include <vector>

#include "channel.hpp"
#include "meijerg.hpp"
#include "specfun.hpp"

namespace plcrf::analytic {

using channel::PlcParams;
using channel::Protocol;
using channel::RfParams;

enum class Metric { OP, BER, ACC };
enum class Kind { exact, asymptotic, upper_bound };

struct MetricValue {
    double value = 0.0;
    Kind kind = Kind::exact;
    Metric metric = Metric::OP;
    Protocol protocol = Protocol::DF;
};

// which RD-hop CDF the DF outage combines with the PLC hop
enum class RdCdfRoute { exact_marcum, truncated };

// ---------------------------------------------------------------------------
// shared machinery
// ---------------------------------------------------------------------------

namespace detail {

struct Comp {
    double w;
    int m;
    double omega;
    double beta() const { return m / omega; }
};

inline std::vector<Comp> mixture(const PlcParams& p) {
    std::vector<Comp> c;
    if (p.p_i < 1.0) c.push_back({1.0 - p.p_i, p.m1, p.omega1});
    if (p.p_i > 0.0) c.push_back({p.p_i, p.m2, p.omega2});
    return c;
}

// log-sum-exp accumulator for positive-term series
struct LogSum {
    double mx = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    void add(double ln_t) {
        if (std::isinf(ln_t) && ln_t < 0) return;
        if (ln_t <= mx) {
            acc += std::exp(ln_t - mx);
        } else {
            acc = acc * std::exp(mx - ln_t) + 1.0;
            mx = ln_t;
        }
    }
    double ln() const { return acc > 0.0 ? mx + std::log(acc) : -std::numeric_limits<double>::infinity(); }
    double sum() const { return acc > 0.0 ? std::exp(mx + std::log(acc)) : 0.0; }
};

// Neumaier compensated sum for signed series
struct SignedSum {
    double s = 0.0, comp = 0.0;
    void add(double v) {
        double t = s + v;
        comp += (std::abs(s) >= std::abs(v)) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double value() const { return s + comp; }
};

} // namespace detail

// Coefficients B_l of the truncated-Bessel expansion and the auxiliaries the
// capacity expressions build from them; recompute whenever K, gamma_bar_rd,
// the truncation order, or the PLC parameters change.
struct TruncationCoefficients {
    int k = 0;                  // truncation order
    int l_terms = 0;            // effective number of contributing l indices
    std::vector<double> ln_b;   // ln B_l, l = 0 .. l_terms
    std::vector<double> ln_suffix_bg;  // ln sum_{j >= l} B_j Gamma(j+1)
    double mass = 1.0;          // e^{-K} sum_l B_l Gamma(l+1), the cdf saturation level

    static TruncationCoefficients compute(const RfParams& rf) {
        rf.validate();
        TruncationCoefficients t;
        t.k = rf.trunc_k;
        t.l_terms = channel::detail::effective_l_terms(rf.k_factor, rf.trunc_k);
        t.ln_b.resize(t.l_terms + 1);
        for (int l = 0; l <= t.l_terms; ++l)
            t.ln_b[l] = channel::detail::ln_trunc_b(l, rf.trunc_k, rf.k_factor);
        t.ln_suffix_bg.assign(t.l_terms + 1, -std::numeric_limits<double>::infinity());
        detail::LogSum suf;
        for (int l = t.l_terms; l >= 0; --l) {
            suf.add(t.ln_b[l] + std::lgamma(l + 1.0));
            t.ln_suffix_bg[l] = suf.ln();
        }
        t.mass = std::exp(-rf.k_factor + t.ln_suffix_bg[0]);
        return t;
    }
};

// ---------------------------------------------------------------------------
// end-to-end AF SNR pdf / cdf
// ---------------------------------------------------------------------------

inline double af_snr_pdf(const PlcParams& plc, const RfParams& rf, double c, double gamma) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("af_snr_pdf: requires c > 0");
    if (!(gamma > 0.0)) throw std::domain_error("af_snr_pdf: requires gamma > 0");
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double A = c * (K + 1.0) / gb;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);

    double total = 0.0;
    for (const auto& cp : detail::mixture(plc)) {
        const double beta = cp.beta();
        const double z = beta * A * gamma;
        const double ln_bg = std::log(beta * gamma);
        const double ln_pre = std::log(cp.w) + std::log(beta) - beta * gamma - K
                            - specfun::ln_gamma(cp.m);
        // ln G^{2,0}_{0,2}[z | -; (d, 0)] per difference d = r - l - 1
        std::map<int, double> ln_g;
        for (int d = -(tc.l_terms + 1); d <= cp.m - 1; ++d)
            ln_g[d] = std::log(2.0) + 0.5 * d * std::log(z)
                    + specfun::ln_bessel_k(d, 2.0 * std::sqrt(z));
        detail::LogSum ls;
        for (int l = 0; l <= tc.l_terms; ++l)
            for (int r = 0; r <= cp.m; ++r)
                ls.add(specfun::ln_binomial(cp.m, r) + (l + cp.m - r) * ln_bg + tc.ln_b[l]
                       + (l + 1.0) * std::log(A) + ln_g[r - l - 1]);
        total += std::exp(ln_pre + ls.ln());
    }
    return total;
}

inline double af_snr_cdf(const PlcParams& plc, const RfParams& rf, double c, double gamma,
                         const meijerg::Precision& prec = meijerg::Precision::univariate()) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("af_snr_cdf: requires c > 0");
    if (!(gamma >= 0.0)) throw std::domain_error("af_snr_cdf: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);

    double total = channel::gamma_sr_cdf(plc, gamma);
    for (const auto& cp : detail::mixture(plc)) {
        const double beta = cp.beta();
        const double chi_g = c * cp.m * (1.0 + K) * gamma / (cp.omega * gb);
        const double ln_bg = std::log(beta * gamma);
        const double ln_pre = std::log(cp.w) - beta * gamma - K - specfun::ln_gamma(cp.m);
        detail::LogSum ls;
        for (int l = 0; l <= tc.l_terms; ++l) {
            for (int r = 0; r < cp.m; ++r) {
                meijerg::MeijerGSpec g;
                g.m = 2;
                g.n = 1;
                g.a = {1.0};
                g.b = {1.0 + r, 1.0 + l, 0.0};
                g.x = chi_g;
                double gv = meijerg::meijer_g(g, prec);
                if (!(gv > 0.0)) continue;
                ls.add(specfun::ln_binomial(cp.m - 1, r) + (cp.m - 1.0 - r) * ln_bg + tc.ln_b[l]
                       + std::log(gv));
            }
        }
        total += std::exp(ln_pre + ls.ln());
    }
    return total;
}

// ---------------------------------------------------------------------------
// DF relaying
// ---------------------------------------------------------------------------

inline double op_df(const PlcParams& plc, const RfParams& rf, double gamma_th,
                    RdCdfRoute route = RdCdfRoute::exact_marcum) {
    plc.validate();
    rf.validate();
    if (!(gamma_th >= 0.0)) throw std::domain_error("op_df: requires gamma_th >= 0");
    if (gamma_th == 0.0) return 0.0;
    const double fsr = channel::gamma_sr_cdf(plc, gamma_th);
    const double frd = route == RdCdfRoute::exact_marcum
                           ? channel::rician_cdf_exact(rf, gamma_th)
                           : channel::rician_cdf_trunc(rf, gamma_th);
    return fsr + frd - fsr * frd;
}

inline double op_df_asymptotic(const PlcParams& plc, const RfParams& rf, double gamma_th) {
    plc.validate();
    rf.validate();
    if (!(gamma_th >= 0.0)) throw std::domain_error("op_df_asymptotic: requires gamma_th >= 0");
    if (gamma_th == 0.0) return 0.0;
    double v = 0.0;
    for (const auto& cp : detail::mixture(plc))
        v += cp.w * std::exp(cp.m * std::log(cp.beta() * gamma_th) - specfun::ln_gamma(cp.m + 1.0));
    v += (1.0 + rf.k_factor) * gamma_th / (rf.gamma_bar_rd * std::exp(rf.k_factor));
    return v;
}

struct BerDfParts {
    double pe1 = 0.0;
    double pe2 = 0.0;            // Eq. 25 route through 1F1
    double pe2_exponential = 0.0;  // same value with 1F1(1;1;z) collapsed to e^z
};

namespace detail {

inline BerDfParts ber_df_parts(const PlcParams& plc, const RfParams& rf) {
    BerDfParts out;
    for (const auto& cp : mixture(plc)) {
        meijerg::MeijerGSpec g;
        g.m = 1;
        g.n = 2;
        g.a = {0.0, 1.0};
        g.b = {static_cast<double>(cp.m), 0.0};
        g.x = cp.beta();
        out.pe1 += cp.w / (2.0 * std::exp(specfun::ln_gamma(cp.m))) * meijerg::meijer_g(g);
    }
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double z = K * (K + 1.0) / (K + 1.0 + gb);
    const double scale = (1.0 + K) / (2.0 * (1.0 + K + gb));
    out.pe2 = scale * std::exp(-K) * specfun::hyp1f1(1.0, 1.0, z);
    out.pe2_exponential = scale * std::exp(z - K);
    return out;
}

} // namespace detail

inline double ber_df(const PlcParams& plc, const RfParams& rf) {
    plc.validate();
    rf.validate();
    const BerDfParts p = detail::ber_df_parts(plc, rf);
    return p.pe1 + p.pe2 - 2.0 * p.pe1 * p.pe2;
}

inline double ber_df_asymptotic(const PlcParams& plc, const RfParams& rf) {
    plc.validate();
    rf.validate();
    double pe1 = 0.0;
    for (const auto& cp : detail::mixture(plc))
        pe1 += 0.5 * cp.w * std::exp(cp.m * std::log(cp.beta()));
    const double pe2 = (1.0 + rf.k_factor) / (2.0 * rf.gamma_bar_rd * std::exp(rf.k_factor));
    return pe1 + pe2;
}

// ---------------------------------------------------------------------------
// DF capacity: C = (C1 + C2 - C3 - C4) / (2 ln 2)
// ---------------------------------------------------------------------------

struct AccDfParts {
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
};

namespace detail {

inline double g1332(double x, double a1, const meijerg::Precision& prec) {
    meijerg::MeijerGSpec g;
    g.m = 1;
    g.n = 3;
    g.a = {a1, 1.0, 1.0};
    g.b = {1.0, 0.0};
    g.x = x;
    return meijerg::meijer_g(g, prec);
}

inline AccDfParts acc_df_parts(const PlcParams& plc, const RfParams& rf,
                               const meijerg::Precision& uni, const meijerg::Precision& biv) {
    AccDfParts out;
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double cc = (K + 1.0) / gb;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);

    for (const auto& cp : mixture(plc))
        out.c1 += cp.w / std::exp(specfun::ln_gamma(cp.m))
                * g1332(cp.omega / cp.m, 1.0 - cp.m, uni);

    {
        SignedSum c2;
        for (int l = 0; l <= tc.l_terms; ++l)
            c2.add(std::exp(tc.ln_b[l] - K) * g1332(gb / (K + 1.0), -static_cast<double>(l), uni));
        out.c2 = c2.value();
    }

    // C3 = mass * C1 - sum_rho w beta^m e^-K / Gamma(m)
    //        sum_{r} Theta_r w_b^{m+r} G1332[w_b | (1-m-r,1,1); (1,0)] SufBG(r)
    {
        SignedSum c3;
        c3.add(tc.mass * out.c1);
        for (const auto& cp : mixture(plc)) {
            const double beta = cp.beta();
            const double wb = 1.0 / (beta + cc);
            const double ln_pre = std::log(cp.w) + cp.m * std::log(beta) - K
                                - specfun::ln_gamma(cp.m);
            for (int r = 0; r <= tc.l_terms; ++r) {
                const double ln_theta = r * std::log(cc) - std::lgamma(r + 1.0);
                const double gv = g1332(wb, 1.0 - cp.m - r, uni);
                c3.add(-std::exp(ln_pre + ln_theta + (cp.m + r) * std::log(wb)
                                 + tc.ln_suffix_bg[r])
                       * gv);
            }
        }
        out.c3 = c3.value();
    }

    // C4 = e^-K sum_rho (w / Gamma(m)) sum_l B_l G[ -l | (1,1;1,0) | (1; m,0) |
    //        gb/(K+1), m gb / (omega (K+1)) ]
    {
        SignedSum c4;
        for (const auto& cp : mixture(plc)) {
            meijerg::BivariateMeijerGSpec s;
            s.first = {1, 2, {1.0, 1.0}, {1.0, 0.0}};
            s.second = {1, 1, {1.0}, {static_cast<double>(cp.m), 0.0}};
            s.x = gb / (K + 1.0);
            s.y = cp.beta() * gb / (K + 1.0);
            const double ln_pre = std::log(cp.w) - K - specfun::ln_gamma(cp.m);
            for (int l = 0; l <= tc.l_terms; ++l) {
                s.outer = {0, 1, {-static_cast<double>(l)}, {}};
                c4.add(std::exp(ln_pre + tc.ln_b[l]) * meijerg::bivariate_meijer_g(s, biv));
            }
        }
        out.c4 = c4.value();
    }
    return out;
}

} // namespace detail

inline double acc_df(const PlcParams& plc, const RfParams& rf,
                     const meijerg::Precision& uni = meijerg::Precision::univariate(),
                     const meijerg::Precision& biv = meijerg::Precision::bivariate()) {
    plc.validate();
    rf.validate();
    const AccDfParts p = detail::acc_df_parts(plc, rf, uni, biv);
    return (p.c1 + p.c2 - p.c3 - p.c4) / (2.0 * std::log(2.0));
}

// E[min(gamma_SR, gamma_RD)] under the truncated RF-hop expansion
inline double df_mean_snr(const PlcParams& plc, const RfParams& rf,
                          const meijerg::Precision& uni = meijerg::Precision::univariate()) {
    plc.validate();
    rf.validate();
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double cc = (K + 1.0) / gb;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);
    detail::SignedSum e;

    const double mean_sr = (1.0 - plc.p_i) * plc.omega1 + plc.p_i * plc.omega2;
    e.add((1.0 - tc.mass) * mean_sr);

    for (const auto& cp : detail::mixture(plc)) {
        const double beta = cp.beta();
        const double wb = 1.0 / (beta + cc);
        const double ln_pre = std::log(cp.w) + cp.m * std::log(beta) - K
                            - specfun::ln_gamma(cp.m);
        detail::LogSum ls;
        for (int r = 0; r <= tc.l_terms; ++r)
            ls.add(r * std::log(cc) - std::lgamma(r + 1.0) + std::lgamma(cp.m + r + 1.0)
                   + (cp.m + r + 1.0) * std::log(wb) + tc.ln_suffix_bg[r]);
        e.add(std::exp(ln_pre + ls.ln()));

        detail::SignedSum gsum;
        for (int l = 0; l <= tc.l_terms; ++l) {
            meijerg::MeijerGSpec g;
            g.m = 1;
            g.n = 2;
            g.a = {-(l + 1.0), 1.0};
            g.b = {static_cast<double>(cp.m), 0.0};
            g.x = beta * gb / (K + 1.0);
            gsum.add(std::exp(tc.ln_b[l]) * meijerg::meijer_g(g, uni));
        }
        e.add(-cp.w * gb * std::exp(-K) / ((K + 1.0) * std::exp(specfun::ln_gamma(cp.m)))
              * gsum.value());
    }

    detail::LogSum tail;
    for (int l = 0; l <= tc.l_terms; ++l)
        tail.add(tc.ln_b[l] + std::lgamma(l + 2.0));
    e.add(gb * std::exp(-K) / (K + 1.0) * tail.sum());
    return e.value();
}

inline double acc_df_upper(const PlcParams& plc, const RfParams& rf) {
    return 0.5 * std::log2(1.0 + df_mean_snr(plc, rf));
}

// ---------------------------------------------------------------------------
// fixed-gain AF relaying
// ---------------------------------------------------------------------------

inline double op_af(const PlcParams& plc, const RfParams& rf, double c, double gamma_th) {
    return af_snr_cdf(plc, rf, c, gamma_th);
}

inline double ber_af(const PlcParams& plc, const RfParams& rf, double c,
                     const meijerg::Precision& prec = meijerg::Precision::univariate()) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("ber_af: requires c > 0");
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);

    double total = detail::ber_df_parts(plc, rf).pe1;
    for (const auto& cp : detail::mixture(plc)) {
        const double ln_pre = std::log(cp.w) + std::log(cp.omega) - K
                            - specfun::ln_gamma(cp.m + 1.0) - std::log(2.0);
        const double ln_ratio = std::log((cp.m + cp.omega) / cp.m);
        const double x = c * cp.m * (1.0 + K) / (gb * (cp.m + cp.omega));
        detail::LogSum ls;
        for (int l = 0; l <= tc.l_terms; ++l) {
            for (int r = 0; r < cp.m; ++r) {
                meijerg::MeijerGSpec g;
                g.m = 2;
                g.n = 2;
                g.a = {1.0 + r - cp.m, 1.0};
                g.b = {1.0 + r, 1.0 + l, 0.0};
                g.x = x;
                double gv = meijerg::meijer_g(g, prec);
                if (!(gv > 0.0)) continue;
                ls.add(specfun::ln_binomial(cp.m - 1, r) + (r - cp.m) * ln_ratio + tc.ln_b[l]
                       + std::log(gv));
            }
        }
        total += std::exp(ln_pre + ls.ln());
    }
    return total;
}

inline double acc_af(const PlcParams& plc, const RfParams& rf, double c,
                     const meijerg::Precision& biv = meijerg::Precision::bivariate()) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("acc_af: requires c > 0");
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double A = c * (1.0 + K) / gb;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);

    double total = 0.0;
    for (const auto& cp : detail::mixture(plc)) {
        const double ln_pre = std::log(cp.w) - K - specfun::ln_gamma(cp.m)
                            - std::log(2.0 * std::log(2.0));
        // the bivariate factor depends on (l, r) only through d = r - l - 1
        std::map<int, detail::LogSum> coef;
        for (int l = 0; l <= tc.l_terms; ++l)
            for (int r = 0; r <= cp.m; ++r)
                coef[r - l - 1].add(specfun::ln_binomial(cp.m, r) + (l + 1.0) * std::log(A)
                                    + tc.ln_b[l]);
        detail::LogSum ls;
        for (const auto& [d, cs] : coef) {
            meijerg::BivariateMeijerGSpec s;
            s.outer = {0, 1, {d + 1.0 - cp.m}, {}};
            s.first = {1, 2, {1.0, 1.0}, {1.0, 0.0}};
            s.second = {2, 0, {}, {static_cast<double>(d), 0.0}};
            s.x = cp.omega / cp.m;
            s.y = A;
            double bv = meijerg::bivariate_meijer_g(s, biv);
            if (!(bv > 0.0)) continue;
            ls.add(cs.ln() + std::log(bv));
        }
        total += std::exp(ln_pre + ls.ln());
    }
    return total;
}

// E[gamma_o] for the fixed-gain AF end-to-end SNR
inline double af_mean_snr(const PlcParams& plc, const RfParams& rf, double c,
                          const meijerg::Precision& prec = meijerg::Precision::univariate()) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("af_mean_snr: requires c > 0");
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double A = c * (1.0 + K) / gb;
    const TruncationCoefficients tc = TruncationCoefficients::compute(rf);

    double total = 0.0;
    for (const auto& cp : detail::mixture(plc)) {
        const double ln_pre = std::log(cp.w) + std::log(cp.omega) - K
                            - specfun::ln_gamma(cp.m + 1.0);
        std::map<int, detail::LogSum> coef;
        for (int l = 0; l <= tc.l_terms; ++l)
            for (int r = 0; r <= cp.m; ++r)
                coef[r - l - 1].add(specfun::ln_binomial(cp.m, r) + (l + 1.0) * std::log(A)
                                    + tc.ln_b[l]);
        detail::LogSum ls;
        for (const auto& [d, cs] : coef) {
            meijerg::MeijerGSpec g;
            g.m = 2;
            g.n = 1;
            g.a = {d - static_cast<double>(cp.m)};
            g.b = {static_cast<double>(d), 0.0};
            g.x = A;
            double gv = meijerg::meijer_g(g, prec);
            if (!(gv > 0.0)) continue;
            ls.add(cs.ln() + std::log(gv));
        }
        total += std::exp(ln_pre + ls.ln());
    }
    return total;
}

inline double acc_af_upper(const PlcParams& plc, const RfParams& rf, double c) {
    return 0.5 * std::log2(1.0 + af_mean_snr(plc, rf, c));
}

} // namespace plcrf::analytic

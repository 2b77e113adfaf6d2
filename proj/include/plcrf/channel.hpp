#pragma once

// Statistical models of the two hops: the power-line hop with log-normal
// fading and two-state (background / background+impulsive) Gaussian noise,
// whose SNR follows a two-component Gamma mixture, and the Rician RF hop in
// both exact (Marcum Q) and truncated-Bessel forms.

#include <cmath>
#include <stdexcept>

#include "meijerg.hpp"
#include "specfun.hpp"

namespace plcrf::channel {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

enum class Protocol { DF, AF };

// ---------------------------------------------------------------------------
// Parameter sets
// ---------------------------------------------------------------------------

struct PlcParams {
    int m1 = 8;              // Gamma shape, background-noise state
    int m2 = 8;              // Gamma shape, impulsive state
    double omega1 = 1.0;     // mean SNR of the background-noise component (linear)
    double omega2 = 1.0;     // mean SNR of the impulsive component (linear)
    double p_i = 0.2;        // impulsive-noise occurrence probability
    double eta = 5.0;        // impulsive-to-background noise power ratio
    double mu_sr = 0.0;      // mean of ln(h)
    double sigma_sr = 0.23;  // std dev of ln(h)
    double gamma_bar_sr1 = 1.0;  // mean SNR with background noise only (linear)

    double gamma_bar_sr2() const { return gamma_bar_sr1 / (1.0 + eta); }

    void validate() const {
        if (m1 < 1 || m2 < 1) throw std::domain_error("PlcParams: m1, m2 must be integers >= 1");
        if (!(omega1 > 0.0) || !(omega2 > 0.0))
            throw std::domain_error("PlcParams: omega1, omega2 must be positive");
        if (!(p_i >= 0.0 && p_i <= 1.0)) throw std::domain_error("PlcParams: p_i must be in [0,1]");
        if (!(eta >= 0.0)) throw std::domain_error("PlcParams: eta must be >= 0");
        if (!(sigma_sr > 0.0)) throw std::domain_error("PlcParams: sigma_sr must be positive");
        if (!(gamma_bar_sr1 > 0.0))
            throw std::domain_error("PlcParams: gamma_bar_sr1 must be positive");
    }

    // Build from the generative log-normal link.  With the default
    // mu = -sigma^2 the fading power is normalized (E|h|^2 = 1), so
    // omega1 equals the mean SNR and omega2 = omega1 / (1 + eta).
    static PlcParams from_mean_snr(int m1, int m2, double p_i, double eta, double sigma,
                                   double gamma_bar_sr1,
                                   double mu = std::numeric_limits<double>::quiet_NaN()) {
        PlcParams p;
        p.m1 = m1;
        p.m2 = m2;
        p.p_i = p_i;
        p.eta = eta;
        p.sigma_sr = sigma;
        p.mu_sr = std::isnan(mu) ? -sigma * sigma : mu;
        p.gamma_bar_sr1 = gamma_bar_sr1;
        const double mean_h2 = std::exp(2.0 * p.mu_sr + 2.0 * sigma * sigma);
        p.omega1 = gamma_bar_sr1 * mean_h2;
        p.omega2 = p.omega1 / (1.0 + eta);
        p.validate();
        return p;
    }
};

// Match the first two moments of gbar * |h|^2, |h|^2 ~ LN(2 mu, 4 sigma^2),
// to a Gamma(m, omega/m) component; m is rounded to the nearest integer >= 1.
struct GammaFit {
    int m;
    double omega;
};

inline GammaFit moment_match_ln_to_gamma(double mu, double sigma, double gamma_bar) {
    if (!(sigma > 0.0) || !(gamma_bar > 0.0))
        throw std::domain_error("moment_match_ln_to_gamma: requires sigma > 0, gamma_bar > 0");
    const double omega = gamma_bar * std::exp(2.0 * mu + 2.0 * sigma * sigma);
    const double m_real = 1.0 / std::expm1(4.0 * sigma * sigma);
    const int m = std::max(1, static_cast<int>(std::lround(m_real)));
    return {m, omega};
}

struct RfParams {
    double k_factor = db_to_linear(6.0);  // Rician K (linear)
    double gamma_bar_rd = 1.0;            // mean SNR (linear)
    int trunc_k = 8000;                   // Bessel truncation order

    void validate() const {
        if (!(k_factor >= 0.0)) throw std::domain_error("RfParams: k_factor must be >= 0");
        if (!(gamma_bar_rd > 0.0)) throw std::domain_error("RfParams: gamma_bar_rd must be positive");
        if (trunc_k < 1) throw std::domain_error("RfParams: trunc_k must be >= 1");
    }
};

struct RelayConfig {
    Protocol protocol = Protocol::DF;
    double c_const = 1.2;  // fixed-gain constant (AF only)

    void validate() const {
        if (protocol == Protocol::AF && !(c_const > 0.0))
            throw std::domain_error("RelayConfig: c_const must be positive for AF");
    }
};

// ---------------------------------------------------------------------------
// PLC hop
// ---------------------------------------------------------------------------

inline double plc_fading_pdf(const PlcParams& p, double h) {
    p.validate();
    if (!(h > 0.0)) throw std::domain_error("plc_fading_pdf: requires h > 0");
    const double z = (std::log(h) - p.mu_sr) / p.sigma_sr;
    return std::exp(-0.5 * z * z) / (h * p.sigma_sr * std::sqrt(2.0 * M_PI));
}

inline double plc_noise_pdf(const PlcParams& p, double n, double sigma_b) {
    p.validate();
    if (!(sigma_b > 0.0)) throw std::domain_error("plc_noise_pdf: requires sigma_b > 0");
    const double v1 = sigma_b * sigma_b;
    const double v2 = v1 * (1.0 + p.eta);
    const double g1 = std::exp(-0.5 * n * n / v1) / std::sqrt(2.0 * M_PI * v1);
    const double g2 = std::exp(-0.5 * n * n / v2) / std::sqrt(2.0 * M_PI * v2);
    return (1.0 - p.p_i) * g1 + p.p_i * g2;
}

inline double gamma_sr_pdf(const PlcParams& p, double gamma) {
    p.validate();
    if (!(gamma > 0.0)) throw std::domain_error("gamma_sr_pdf: requires gamma > 0");
    auto comp = [&](int m, double omega) {
        const double beta = m / omega;
        return std::exp(m * std::log(beta) + (m - 1.0) * std::log(gamma) - beta * gamma
                        - specfun::ln_gamma(static_cast<double>(m)));
    };
    return (1.0 - p.p_i) * comp(p.m1, p.omega1) + p.p_i * comp(p.m2, p.omega2);
}

inline double gamma_sr_cdf(const PlcParams& p, double gamma) {
    p.validate();
    if (!(gamma >= 0.0)) throw std::domain_error("gamma_sr_cdf: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    return (1.0 - p.p_i) * specfun::lower_inc_gamma_reg(p.m1, p.m1 * gamma / p.omega1)
         + p.p_i * specfun::lower_inc_gamma_reg(p.m2, p.m2 * gamma / p.omega2);
}

// Same CDF through the Meijer G route, kept on the forced contour evaluator
// so it stays an independent second path.
inline double gamma_sr_cdf_meijer(const PlcParams& p, double gamma,
                                  const meijerg::Precision& prec = meijerg::Precision::univariate()) {
    p.validate();
    if (!(gamma >= 0.0)) throw std::domain_error("gamma_sr_cdf_meijer: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    auto comp = [&](int m, double omega) {
        meijerg::MeijerGSpec g;
        g.m = 1;
        g.n = 1;
        g.a = {1.0};
        g.b = {static_cast<double>(m), 0.0};
        g.x = m * gamma / omega;
        return meijerg::meijer_g_contour(g, prec) / std::exp(specfun::ln_gamma(m));
    };
    return (1.0 - p.p_i) * comp(p.m1, p.omega1) + p.p_i * comp(p.m2, p.omega2);
}

// ---------------------------------------------------------------------------
// RF hop, exact forms
// ---------------------------------------------------------------------------

inline double rician_pdf_exact(const RfParams& rf, double gamma) {
    rf.validate();
    if (!(gamma > 0.0)) throw std::domain_error("rician_pdf_exact: requires gamma > 0");
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double arg = 2.0 * std::sqrt(K * (K + 1.0) * gamma / gb);
    const double ln_i0 = (arg == 0.0) ? 0.0 : std::log(specfun::bessel_i_scaled(0, arg)) + arg;
    return std::exp(std::log((K + 1.0) / gb) - (K + 1.0) * gamma / gb - K + ln_i0);
}

inline double rician_cdf_exact(const RfParams& rf, double gamma) {
    rf.validate();
    if (!(gamma >= 0.0)) throw std::domain_error("rician_cdf_exact: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    return specfun::marcum_q1_complement(std::sqrt(2.0 * K),
                                         std::sqrt(2.0 * (K + 1.0) * gamma / gb));
}

// ---------------------------------------------------------------------------
// RF hop, truncated-Bessel forms
// ---------------------------------------------------------------------------

namespace detail {

// ln B_l = ln[ k^{1-2l} K^l Gamma(k+l) / (Gamma(k-l+1) Gamma(l+1)^2) ]
inline double ln_trunc_b(int l, int k, double K) {
    if (K == 0.0 && l > 0) return -std::numeric_limits<double>::infinity();
    const double kk = static_cast<double>(k);
    return (1.0 - 2.0 * l) * std::log(kk) + (l > 0 ? l * std::log(K) : 0.0)
         + std::lgamma(kk + l) - std::lgamma(kk - l + 1.0) - 2.0 * std::lgamma(l + 1.0);
}

// number of l-terms that can contribute above 1e-18 relative: the summand
// envelope is Poissonian, B_l Gamma(l+1) <= K^l / l!
inline int effective_l_terms(double K, int k) {
    if (K == 0.0) return 0;
    double lw = -K;  // ln of K^l/l! e^{-K}
    int l = 0;
    double lmax = lw;
    while (l < k) {
        ++l;
        lw += std::log(K) - std::log(static_cast<double>(l));
        lmax = std::max(lmax, lw);
        if (l > K && lw < lmax - 46.0) break;
    }
    return l;
}

inline void check_trunc_validity(const RfParams& rf, double gamma) {
    const double arg =
        2.0 * std::sqrt(rf.k_factor * (rf.k_factor + 1.0) * gamma / rf.gamma_bar_rd);
    if (arg >= 2.0 * rf.trunc_k)
        throw std::domain_error(
            "rician truncated form: Bessel argument outside the validity region (raise trunc_k)");
}

} // namespace detail

inline double rician_pdf_trunc(const RfParams& rf, double gamma) {
    rf.validate();
    if (!(gamma > 0.0)) throw std::domain_error("rician_pdf_trunc: requires gamma > 0");
    detail::check_trunc_validity(rf, gamma);
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double x = (K + 1.0) * gamma / gb;
    const int lmax = detail::effective_l_terms(K, rf.trunc_k);
    double sum = 0.0;
    const double lnx = std::log(x);
    for (int l = 0; l <= lmax; ++l) {
        double t = std::exp(detail::ln_trunc_b(l, rf.trunc_k, K) + l * lnx);
        sum += t;
        if (l > std::sqrt(K * x) + 4.0 && t < sum * 1e-18) break;
    }
    return (K + 1.0) / gb * std::exp(-x - K) * sum;
}

// Term-wise integral of the truncated pdf:
//   F(gamma) = e^{-K} sum_l B_l IncGammaLower(l+1, (K+1) gamma / gbar)
// which is exactly 0 at gamma = 0 and saturates at e^{-K} sum_l B_l Gamma(l+1).
inline double rician_cdf_trunc(const RfParams& rf, double gamma) {
    rf.validate();
    if (!(gamma >= 0.0)) throw std::domain_error("rician_cdf_trunc: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    detail::check_trunc_validity(rf, gamma);
    const double K = rf.k_factor, gb = rf.gamma_bar_rd;
    const double x = (K + 1.0) * gamma / gb;
    const int lmax = detail::effective_l_terms(K, rf.trunc_k);
    double sum = 0.0;
    for (int l = 0; l <= lmax; ++l) {
        sum += std::exp(detail::ln_trunc_b(l, rf.trunc_k, K) + std::lgamma(l + 1.0))
             * specfun::lower_inc_gamma_reg(l + 1.0, x);
    }
    return std::exp(-K) * sum;
}

// Saturation level of the truncated CDF, e^{-K} sum_l B_l Gamma(l+1); the
// shortfall from 1 is the truncation mass deficit.
inline double rician_trunc_mass(const RfParams& rf) {
    rf.validate();
    const int lmax = detail::effective_l_terms(rf.k_factor, rf.trunc_k);
    double sum = 0.0;
    for (int l = 0; l <= lmax; ++l)
        sum += std::exp(detail::ln_trunc_b(l, rf.trunc_k, rf.k_factor) + std::lgamma(l + 1.0));
    return std::exp(-rf.k_factor) * sum;
}

} // namespace plcrf::channel

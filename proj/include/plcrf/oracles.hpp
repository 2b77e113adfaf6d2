#pragma once

// Independent brute-force references: adaptive quadrature of the defining
// integrals of the end-to-end metrics.  Every closed form in analytic.hpp is
// validated against these.  The end-to-end SNR integrals use the exact
// (Marcum-Q / Bessel-series) Rician forms, never the truncated ones, and the
// substitution t = x - gamma so the integrand is regular at the lower limit.

#include <cmath>
#include <stdexcept>

#include "channel.hpp"
#include "quadrature.hpp"

namespace plcrf::oracles {

using quadrature::QuadratureConfig;

namespace detail {

inline double mixture_mean(const channel::PlcParams& p) {
    return (1.0 - p.p_i) * p.omega1 + p.p_i * p.omega2;
}

// upper integration limit for integrals against f_SR(gamma + t): chosen from
// the cutoff multiplier and grown until the exponential tail bound drops
// below abs_tol
inline double sr_tail_cutoff(const channel::PlcParams& p, double gamma,
                             const QuadratureConfig& cfg) {
    double u = std::max(cfg.tail_cutoff_multiplier * mixture_mean(p), 8.0 * (gamma + 1.0));
    for (int i = 0; i < 60; ++i) {
        double tail = 1.0 - channel::gamma_sr_cdf(p, gamma + u);
        if (tail < cfg.abs_tol) return u;
        u *= 2.0;
    }
    throw std::runtime_error("oracles: could not bound the f_SR tail");
}

} // namespace detail

// f_{gamma_o}(gamma) = int_0^inf f_RD(C gamma / t) C (t + gamma) / t^2 f_SR(gamma + t) dt
inline double af_pdf_quadrature(const channel::PlcParams& plc, const channel::RfParams& rf,
                                double c, double gamma, QuadratureConfig cfg = {1e-12, 1e-9, 6000, 40.0}) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("af_pdf_quadrature: requires c > 0");
    if (!(gamma > 0.0)) throw std::domain_error("af_pdf_quadrature: requires gamma > 0");
    auto integrand = [&](double t) {
        return channel::rician_pdf_exact(rf, c * gamma / t) * c * (t + gamma) / (t * t)
               * channel::gamma_sr_pdf(plc, gamma + t);
    };
    const double u = detail::sr_tail_cutoff(plc, gamma, cfg);
    auto r = quadrature::integrate(integrand, 0.0, u, cfg);
    if (!r.converged)
        throw std::runtime_error("af_pdf_quadrature: quadrature did not converge (error "
                                 + std::to_string(r.error_estimate) + ")");
    return r.value;
}

// F_{gamma_o}(gamma) = F_SR(gamma) + int_0^inf F_RD(C gamma / t) f_SR(gamma + t) dt
inline double af_cdf_quadrature(const channel::PlcParams& plc, const channel::RfParams& rf,
                                double c, double gamma, QuadratureConfig cfg = {1e-12, 1e-9, 6000, 40.0}) {
    plc.validate();
    rf.validate();
    if (!(c > 0.0)) throw std::domain_error("af_cdf_quadrature: requires c > 0");
    if (!(gamma >= 0.0)) throw std::domain_error("af_cdf_quadrature: requires gamma >= 0");
    if (gamma == 0.0) return 0.0;
    auto integrand = [&](double t) {
        return channel::rician_cdf_exact(rf, c * gamma / t) * channel::gamma_sr_pdf(plc, gamma + t);
    };
    const double u = detail::sr_tail_cutoff(plc, gamma, cfg);
    auto r = quadrature::integrate(integrand, 0.0, u, cfg);
    if (!r.converged)
        throw std::runtime_error("af_cdf_quadrature: quadrature did not converge (error "
                                 + std::to_string(r.error_estimate) + ")");
    return channel::gamma_sr_cdf(plc, gamma) + r.value;
}

// (q^p / 2 Gamma(p)) int_0^inf e^{-q gamma} gamma^{p-1} F(gamma) dgamma
template <class Cdf>
inline double ber_quadrature(Cdf&& cdf, double p, double q, QuadratureConfig cfg = {1e-12, 1e-9, 6000, 40.0}) {
    if (!(p > 0.0) || !(q > 0.0)) throw std::domain_error("ber_quadrature: requires p, q > 0");
    auto integrand = [&](double g) {
        return std::exp(-q * g + (p - 1.0) * std::log(g)) * cdf(g);
    };
    double v = quadrature::integrate_semi_infinite_or_throw(integrand, 0.0, cfg, "ber_quadrature");
    return 0.5 * std::exp(p * std::log(q) - std::lgamma(p)) * v;
}

// 0.5 E[log2(1 + gamma)] = (0.5 / ln 2) int_0^inf ln(1+gamma) pdf(gamma) dgamma
template <class Pdf>
inline double acc_quadrature(Pdf&& pdf, QuadratureConfig cfg = {1e-12, 1e-9, 6000, 40.0}) {
    auto integrand = [&](double g) { return g > 0.0 ? std::log1p(g) * pdf(g) : 0.0; };
    double v = quadrature::integrate_semi_infinite_or_throw(integrand, 0.0, cfg, "acc_quadrature");
    return 0.5 * v / std::log(2.0);
}

// first moment of a density on [0, inf)
template <class Pdf>
inline double mean_quadrature(Pdf&& pdf, QuadratureConfig cfg = {1e-12, 1e-9, 6000, 40.0}) {
    auto integrand = [&](double g) { return g > 0.0 ? g * pdf(g) : 0.0; };
    return quadrature::integrate_semi_infinite_or_throw(integrand, 0.0, cfg, "mean_quadrature");
}

// density of min(gamma_SR, gamma_RD) with the exact Rician forms; this is the
// f_gamma the DF capacity and mean-SNR oracles integrate against
inline double df_min_pdf(const channel::PlcParams& plc, const channel::RfParams& rf, double g) {
    const double fsr = channel::gamma_sr_pdf(plc, g);
    const double frd = channel::rician_pdf_exact(rf, g);
    const double Fsr = channel::gamma_sr_cdf(plc, g);
    const double Frd = channel::rician_cdf_exact(rf, g);
    return fsr + frd - fsr * Frd - Fsr * frd;
}

} // namespace plcrf::oracles

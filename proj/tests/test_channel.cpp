#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "plcrf/channel.hpp"
#include "plcrf/quadrature.hpp"
#include "testutil.hpp"

using namespace plcrf;
using namespace plcrf::channel;
using testutil::rel_err;

namespace {

PlcParams default_plc(double gamma_bar) {
    return PlcParams::from_mean_snr(8, 8, 0.2, 5.0, 0.23, gamma_bar);
}

RfParams default_rf(double gamma_bar, int k = 6000) {
    RfParams rf;
    rf.k_factor = db_to_linear(6.0);
    rf.gamma_bar_rd = gamma_bar;
    rf.trunc_k = k;
    return rf;
}

} // namespace

TEST_CASE("parameter validation and dB conversion") {
    CHECK(rel_err(db_to_linear(6.0), std::pow(10.0, 0.6)) < 1e-15);
    CHECK(rel_err(db_to_linear(0.0), 1.0) < 1e-15);
    CHECK(rel_err(linear_to_db(db_to_linear(13.7)), 13.7) < 1e-12);

    PlcParams p = default_plc(10.0);
    CHECK_NOTHROW(p.validate());
    CHECK(rel_err(p.omega1, 10.0) < 1e-14);          // mu = -sigma^2 normalization
    CHECK(rel_err(p.omega2, 10.0 / 6.0) < 1e-14);    // omega2 = omega1 / (1 + eta)
    CHECK(rel_err(p.gamma_bar_sr2(), 10.0 / 6.0) < 1e-14);

    PlcParams bad = p;
    bad.p_i = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = p;
    bad.m1 = 0;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    RelayConfig rc;
    rc.protocol = Protocol::AF;
    rc.c_const = 0.0;
    CHECK_THROWS_AS(rc.validate(), std::domain_error);

    auto fit = moment_match_ln_to_gamma(-0.23 * 0.23, 0.23, 10.0);
    CHECK(fit.m >= 1);
    CHECK(fit.omega > 0.0);
    CHECK(fit.m == std::max(1, (int)std::lround(1.0 / std::expm1(4 * 0.23 * 0.23))));
}

TEST_CASE("log-normal fading pdf") {
    PlcParams p = default_plc(10.0);
    // at h = e^mu the exponent vanishes
    double h0 = std::exp(p.mu_sr);
    CHECK(rel_err(plc_fading_pdf(p, h0), 1.0 / (h0 * p.sigma_sr * std::sqrt(2.0 * M_PI))) < 1e-14);

    PlcParams q = p;
    q.mu_sr = 0.0;
    CHECK(rel_err(plc_fading_pdf(q, 1.0), 1.0 / std::sqrt(2.0 * M_PI * 0.0529)) < 1e-14);

    auto norm = quadrature::integrate_semi_infinite(
        [&](double h) { return h > 0 ? plc_fading_pdf(p, h) : 0.0; }, 1e-14, {1e-10, 1e-9, 8000});
    CHECK(rel_err(norm.value, 1.0) < 1e-6);
    CHECK_THROWS_AS(plc_fading_pdf(p, 0.0), std::domain_error);
}

TEST_CASE("impulsive noise mixture pdf") {
    PlcParams p = default_plc(1.0);
    const double sb = 0.8;

    PlcParams p0 = p;
    p0.p_i = 0.0;
    CHECK(rel_err(plc_noise_pdf(p0, 0.3, sb),
                  std::exp(-0.5 * 0.09 / (sb * sb)) / std::sqrt(2 * M_PI * sb * sb)) < 1e-14);

    PlcParams p1 = p;
    p1.p_i = 1.0;
    p1.eta = 0.0;
    CHECK(rel_err(plc_noise_pdf(p1, 0.3, sb), plc_noise_pdf(p0, 0.3, sb)) < 1e-14);

    // defaults at n = 0: 0.8/sqrt(2 pi sb^2) + 0.2/sqrt(12 pi sb^2)
    double want = 0.8 / std::sqrt(2 * M_PI * sb * sb) + 0.2 / std::sqrt(12 * M_PI * sb * sb);
    CHECK(rel_err(plc_noise_pdf(p, 0.0, sb), want) < 1e-14);

    auto norm = quadrature::integrate(
        [&](double n) { return plc_noise_pdf(p, n, sb); }, -40.0, 40.0, {1e-11, 1e-10, 8000});
    CHECK(rel_err(norm.value, 1.0) < 1e-9);
}

TEST_CASE("PLC SNR gamma mixture") {
    PlcParams p = default_plc(10.0);

    SECTION("exponential collapse") {
        PlcParams e = p;
        e.p_i = 0.0;
        e.m1 = 1;
        e.omega1 = 1.0;
        CHECK(rel_err(gamma_sr_pdf(e, 0.7), std::exp(-0.7)) < 1e-14);
        CHECK(rel_err(gamma_sr_cdf(e, 1.0), 1.0 - std::exp(-1.0)) < 1e-14);
    }

    SECTION("normalization and component means") {
        auto norm = quadrature::integrate_semi_infinite(
            [&](double g) { return g > 0 ? gamma_sr_pdf(p, g) : 0.0; }, 0.0, {1e-11, 1e-10, 8000});
        CHECK(rel_err(norm.value, 1.0) < 1e-8);
        auto mean = quadrature::integrate_semi_infinite(
            [&](double g) { return g > 0 ? g * gamma_sr_pdf(p, g) : 0.0; }, 0.0,
            {1e-11, 1e-10, 8000});
        CHECK(rel_err(mean.value, 0.8 * p.omega1 + 0.2 * p.omega2) < 1e-8);
    }

    SECTION("cdf properties and quadrature cross-check") {
        CHECK(gamma_sr_cdf(p, 0.0) == 0.0);
        double prev = 0.0;
        for (double g = 0.0; g <= 60.0; g += 0.06) {
            double c = gamma_sr_cdf(p, g);
            CHECK(c >= prev - 1e-15);
            CHECK((c >= 0.0 && c <= 1.0));
            prev = c;
        }
        CHECK(1.0 - gamma_sr_cdf(p, 600.0) < 1e-6);
        double byquad = quadrature::integrate_or_throw(
            [&](double g) { return gamma_sr_pdf(p, g); }, 1e-300, 1.0, {1e-12, 1e-11, 8000});
        CHECK(rel_err(gamma_sr_cdf(p, 1.0), byquad) < 1e-9);
    }

    SECTION("Meijer-G route agrees with the incomplete-gamma route") {
        for (double g : {0.05, 0.3, 1.0, 4.0, 30.0}) {
            CAPTURE(g);
            CHECK(rel_err(gamma_sr_cdf_meijer(p, g), gamma_sr_cdf(p, g)) < 1e-10);
        }
    }
}

TEST_CASE("Rician exact forms") {
    RfParams rf = default_rf(10.0);

    SECTION("Rayleigh reduction at K = 0") {
        RfParams r0 = rf;
        r0.k_factor = 0.0;
        for (double g : {0.2, 1.0, 5.0}) {
            CHECK(rel_err(rician_pdf_exact(r0, g), std::exp(-g / 10.0) / 10.0) < 1e-13);
            CHECK(rel_err(rician_cdf_exact(r0, g), -std::expm1(-g / 10.0)) < 1e-13);
        }
    }

    SECTION("normalization, cdf limits, pdf/cdf consistency") {
        auto norm = quadrature::integrate_semi_infinite(
            [&](double g) { return g > 0 ? rician_pdf_exact(rf, g) : 0.0; }, 0.0,
            {1e-11, 1e-10, 8000});
        CHECK(rel_err(norm.value, 1.0) < 1e-8);

        CHECK(rician_cdf_exact(rf, 0.0) == 0.0);
        double prev = 0.0;
        for (double g = 0.0; g <= 80.0; g += 0.08) {
            double c = rician_cdf_exact(rf, g);
            CHECK(c >= prev - 1e-15);
            prev = c;
        }
        CHECK(1.0 - rician_cdf_exact(rf, 200.0) < 1e-6);

        for (double g : {0.4, 5.0, 12.0}) {
            double byquad = quadrature::integrate_or_throw(
                [&](double t) { return t > 0 ? rician_pdf_exact(rf, t) : 0.0; }, 0.0, g,
                {1e-12, 1e-11, 8000});
            CHECK(std::abs(rician_cdf_exact(rf, g) - byquad) < 1e-8);
        }

        // spot value cross-checked by series pdf
        RfParams r;
        r.k_factor = std::pow(10.0, 0.6);
        r.gamma_bar_rd = 10.0;
        double direct = (r.k_factor + 1.0) / 10.0
                      * std::exp(-(r.k_factor + 1.0) * 5.0 / 10.0 - r.k_factor)
                      * specfun::bessel_i(0, 2.0 * std::sqrt(r.k_factor * (r.k_factor + 1) * 0.5));
        CHECK(rel_err(rician_pdf_exact(r, 5.0), direct) < 1e-12);
    }
}

TEST_CASE("Rician truncated forms") {
    SECTION("K = 0 reduces to the exact Rayleigh forms for any k") {
        RfParams r0 = default_rf(7.0, 1);
        r0.k_factor = 0.0;
        for (double g : {0.3, 2.0, 6.0}) {
            CHECK(rel_err(rician_pdf_trunc(r0, g), std::exp(-g / 7.0) / 7.0) < 1e-13);
            CHECK(rel_err(rician_cdf_trunc(r0, g), -std::expm1(-g / 7.0)) < 1e-13);
        }
    }

    SECTION("cdf is exactly zero at the origin") {
        RfParams rf = default_rf(10.0, 20);
        CHECK(rician_cdf_trunc(rf, 0.0) == 0.0);
    }

    SECTION("truncated forms approach the exact ones as k grows") {
        const double gb = 10.0;
        RfParams exact = default_rf(gb);
        double prev_pdf = std::numeric_limits<double>::max();
        double prev_cdf = std::numeric_limits<double>::max();
        for (int k : {20, 60, 180, 540}) {
            RfParams rf = default_rf(gb, k);
            double dp = 0.0, dc = 0.0;
            for (double g = 0.25; g <= 40.0; g += 0.25) {
                dp = std::max(dp, std::abs(rician_pdf_trunc(rf, g) - rician_pdf_exact(exact, g)));
                dc = std::max(dc, std::abs(rician_cdf_trunc(rf, g) - rician_cdf_exact(exact, g)));
            }
            CHECK(dp <= prev_pdf + 1e-15);
            CHECK(dc <= prev_cdf + 1e-15);
            prev_pdf = dp;
            prev_cdf = dc;
        }
        CHECK(prev_cdf < 2e-4);  // k = 540 sup-norm error
    }

    SECTION("k = 20 matches the exact forms at gamma = gamma_bar to the recorded tolerance") {
        RfParams rf = default_rf(10.0, 20);
        RfParams exact = default_rf(10.0);
        CHECK(rel_err(rician_pdf_trunc(rf, 10.0), rician_pdf_exact(exact, 10.0)) < 0.07);
        CHECK(rel_err(rician_cdf_trunc(rf, 10.0), rician_cdf_exact(exact, 10.0)) < 0.035);
    }

    SECTION("validity region is enforced") {
        RfParams rf = default_rf(1.0, 3);
        CHECK_THROWS_AS(rician_pdf_trunc(rf, 50.0), std::domain_error);
        CHECK_THROWS_AS(rician_cdf_trunc(rf, 50.0), std::domain_error);
    }

    SECTION("saturation mass") {
        RfParams rf = default_rf(10.0, 20);
        double mass = rician_trunc_mass(rf);
        CHECK(mass < 1.0);
        CHECK(mass > 0.9);  // ~0.934 at K = 6 dB, k = 20
        RfParams big = default_rf(10.0, 6000);
        CHECK(rel_err(rician_trunc_mass(big), 1.0) < 1e-6);
    }
}

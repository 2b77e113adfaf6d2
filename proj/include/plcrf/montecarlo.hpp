#pragma once

// Generative simulation of both hops and unbiased estimation of outage
// probability, average DBPSK BER, and average capacity with standard errors.
//
// Sampling uses a counter-based Philox-style 4x64 generator with one
// substream per fixed-size chunk of samples, so estimates are bit-identical
// for a given (seed, n_samples, mode) regardless of the worker count:
// chunks are deterministic units and the final reduction runs in chunk order.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "channel.hpp"

namespace plcrf::mc {

enum class PlcMode { gamma_mixture, generative_ln };

struct McConfig {
    std::int64_t n_samples = 10000000;
    std::uint64_t seed = 0x5eed0001u;
    PlcMode plc_mode = PlcMode::gamma_mixture;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const {
        if (n_samples < 1) throw std::domain_error("McConfig: n_samples must be positive");
        if (workers < 0) throw std::domain_error("McConfig: workers must be >= 0");
    }
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n = 0;
};

// ---------------------------------------------------------------------------
// counter-based generator
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline void philox_round(std::array<std::uint64_t, 4>& x, std::uint64_t k0, std::uint64_t k1) {
    const unsigned __int128 p0 = (unsigned __int128)kPhiloxM0 * x[0];
    const unsigned __int128 p1 = (unsigned __int128)kPhiloxM1 * x[2];
    const std::uint64_t lo0 = (std::uint64_t)p0, hi0 = (std::uint64_t)(p0 >> 64);
    const std::uint64_t lo1 = (std::uint64_t)p1, hi1 = (std::uint64_t)(p1 >> 64);
    x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
}

inline std::array<std::uint64_t, 4> philox_block(std::uint64_t seed,
                                                 std::array<std::uint64_t, 4> ctr) {
    std::uint64_t k0 = seed, k1 = seed ^ 0x1F123BB5159A55E5ull;
    for (int round = 0; round < 10; ++round) {
        philox_round(ctr, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

// sequential uniform stream over one chunk's substream
class ChunkStream {
public:
    ChunkStream(std::uint64_t seed, std::uint64_t chunk_id)
        : seed_(seed), chunk_(chunk_id) {}

    // uniform in the open interval (0, 1)
    double uniform() {
        if (pos_ == 4) refill();
        const std::uint64_t bits = buf_[pos_++] >> 11;  // 53 bits
        return (double)bits * 0x1.0p-53 + 0x1.0p-54;
    }

    // standard normal pair via Box-Muller
    std::pair<double, double> normal_pair() {
        const double u1 = uniform(), u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

private:
    void refill() {
        buf_ = philox_block(seed_, {block_++, chunk_, 0x706c637266ull /* stream tag */, 0});
        pos_ = 0;
    }

    std::uint64_t seed_, chunk_;
    std::uint64_t block_ = 0;
    std::array<std::uint64_t, 4> buf_{};
    int pos_ = 4;
};

inline constexpr std::int64_t kChunkSamples = 1 << 16;

} // namespace detail

// ---------------------------------------------------------------------------
// per-hop samplers
// ---------------------------------------------------------------------------

// integer-shape Gamma(m, omega/m) as a sum of m exponentials
inline double sample_gamma_component(int m, double omega, detail::ChunkStream& rng) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s -= std::log(rng.uniform());
    return s * omega / m;
}

inline double sample_gamma_sr(const channel::PlcParams& plc, PlcMode mode,
                              detail::ChunkStream& rng) {
    if (mode == PlcMode::gamma_mixture) {
        const double u = rng.uniform();
        return u < plc.p_i ? sample_gamma_component(plc.m2, plc.omega2, rng)
                           : sample_gamma_component(plc.m1, plc.omega1, rng);
    }
    const auto [z, z2] = rng.normal_pair();
    (void)z2;
    const double h = std::exp(plc.mu_sr + plc.sigma_sr * z);
    const double u = rng.uniform();
    const double gbar = u < plc.p_i ? plc.gamma_bar_sr2() : plc.gamma_bar_sr1;
    return gbar * h * h;
}

inline double sample_gamma_rd(const channel::RfParams& rf, detail::ChunkStream& rng) {
    const double K = rf.k_factor;
    const auto [z1, z2] = rng.normal_pair();
    const double los = std::sqrt(K / (K + 1.0));
    const double sc = std::sqrt(0.5 / (K + 1.0));
    const double re = los + sc * z1;
    const double im = sc * z2;
    return rf.gamma_bar_rd * (re * re + im * im);
}

// ---------------------------------------------------------------------------
// estimators
// ---------------------------------------------------------------------------

namespace detail {

struct ChunkMoments {
    double sum = 0.0;
    double sumsq = 0.0;
};

// map chunks over a worker pool, reduce partials in chunk order
template <class PerSample>
inline Estimate estimate(const McConfig& mc, PerSample&& value_of) {
    mc.validate();
    const std::int64_t n = mc.n_samples;
    const std::int64_t n_chunks = (n + kChunkSamples - 1) / kChunkSamples;
    std::vector<ChunkMoments> parts(n_chunks);
    const int workers = mc.workers > 0
                            ? mc.workers
                            : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<std::int64_t> next{0};
    auto run = [&]() {
        for (;;) {
            const std::int64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            ChunkStream rng(mc.seed, (std::uint64_t)c);
            const std::int64_t lo = c * kChunkSamples;
            const std::int64_t cnt = std::min<std::int64_t>(kChunkSamples, n - lo);
            ChunkMoments m;
            for (std::int64_t i = 0; i < cnt; ++i) {
                const double v = value_of(rng);
                m.sum += v;
                m.sumsq += v * v;
            }
            parts[c] = m;
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& t : pool) t.join();
    }
    double sum = 0.0, sumsq = 0.0;
    for (const auto& m : parts) {  // fixed order: bit-identical for any worker count
        sum += m.sum;
        sumsq += m.sumsq;
    }
    Estimate e;
    e.n = n;
    e.mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / n);
    return e;
}

} // namespace detail

inline double end_to_end_snr(double gsr, double grd, const channel::RelayConfig& relay) {
    if (relay.protocol == channel::Protocol::DF) return std::min(gsr, grd);
    return gsr * grd / (relay.c_const + grd);
}

inline Estimate estimate_op(const channel::PlcParams& plc, const channel::RfParams& rf,
                            const channel::RelayConfig& relay, double gamma_th,
                            const McConfig& mc) {
    plc.validate();
    rf.validate();
    relay.validate();
    if (!(gamma_th >= 0.0)) throw std::domain_error("estimate_op: requires gamma_th >= 0");
    Estimate e = detail::estimate(mc, [&](detail::ChunkStream& rng) {
        const double g = end_to_end_snr(sample_gamma_sr(plc, mc.plc_mode, rng),
                                        sample_gamma_rd(rf, rng), relay);
        return g < gamma_th ? 1.0 : 0.0;
    });
    // binomial standard error
    e.std_error = std::sqrt(std::max(0.0, e.mean * (1.0 - e.mean)) / e.n);
    return e;
}

// conditional (Rao-Blackwellized) DBPSK BER: per-sample 0.5 e^-gamma per hop,
// combined as e1 + e2 - 2 e1 e2 for DF, or 0.5 e^-gamma_o for AF
inline Estimate estimate_ber(const channel::PlcParams& plc, const channel::RfParams& rf,
                             const channel::RelayConfig& relay, const McConfig& mc) {
    plc.validate();
    rf.validate();
    relay.validate();
    return detail::estimate(mc, [&](detail::ChunkStream& rng) {
        const double gsr = sample_gamma_sr(plc, mc.plc_mode, rng);
        const double grd = sample_gamma_rd(rf, rng);
        if (relay.protocol == channel::Protocol::DF) {
            const double e1 = 0.5 * std::exp(-gsr);
            const double e2 = 0.5 * std::exp(-grd);
            return e1 + e2 - 2.0 * e1 * e2;
        }
        return 0.5 * std::exp(-end_to_end_snr(gsr, grd, relay));
    });
}

inline Estimate estimate_acc(const channel::PlcParams& plc, const channel::RfParams& rf,
                             const channel::RelayConfig& relay, const McConfig& mc) {
    plc.validate();
    rf.validate();
    relay.validate();
    return detail::estimate(mc, [&](detail::ChunkStream& rng) {
        const double g = end_to_end_snr(sample_gamma_sr(plc, mc.plc_mode, rng),
                                        sample_gamma_rd(rf, rng), relay);
        return 0.5 * std::log2(1.0 + g);
    });
}

// ---------------------------------------------------------------------------
// distribution checks
// ---------------------------------------------------------------------------

// Kolmogorov-Smirnov distance between n samples of `draw` and a reference cdf
template <class Draw, class Cdf>
inline double ks_distance(Draw&& draw, Cdf&& cdf, std::int64_t n, std::uint64_t seed) {
    std::vector<double> xs;
    xs.reserve(n);
    const std::int64_t n_chunks = (n + detail::kChunkSamples - 1) / detail::kChunkSamples;
    for (std::int64_t c = 0; c < n_chunks; ++c) {
        detail::ChunkStream rng(seed, (std::uint64_t)c);
        const std::int64_t cnt = std::min<std::int64_t>(detail::kChunkSamples,
                                                        n - c * detail::kChunkSamples);
        for (std::int64_t i = 0; i < cnt; ++i) xs.push_back(draw(rng));
    }
    std::sort(xs.begin(), xs.end());
    double d = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs((i + 1.0) / n - f));
        d = std::max(d, std::abs(f - (double)i / n));
    }
    return d;
}

} // namespace plcrf::mc

#include <cmath>

#include "cvqkd/fft.hpp"
#include "cvqkd/spectral.hpp"
#include "cvqkd/txdsp.hpp"
#include "doctest.h"

using namespace cvqkd;

namespace {

TxConfig small_cfg() {
    TxConfig cfg;
    // fast tests; 500000 samples at 1 GS/s puts 120/220 MHz on exact bins
    cfg.frame_len = 500'000;
    return cfg;
}

double total_power(std::span<const cplx> x) {
    double p = 0.0;
    for (const auto& v : x) p += std::norm(v);
    return p;
}

}  // namespace

TEST_CASE("rrc taps: unit energy, symmetry, Nyquist ISI") {
    const auto h = txdsp::rrc_taps(0.2, 40, 8);
    REQUIRE(h.size() == 321);
    double e = 0.0;
    for (double v : h) e += v * v;
    CHECK(e == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < h.size(); ++i) CHECK(h[i] == h[h.size() - 1 - i]);

    // taps convolved with themselves, sampled at the symbol spacing
    std::vector<double> rc(2 * h.size() - 1, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i)
        for (std::size_t j = 0; j < h.size(); ++j) rc[i + j] += h[i] * h[j];
    const std::size_t mid = h.size() - 1;
    CHECK(rc[mid] == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t k = 1; 8 * k <= mid; ++k) {
        CHECK(std::abs(rc[mid + 8 * k]) < 1e-3);
        CHECK(std::abs(rc[mid - 8 * k]) < 1e-3);
    }
}

TEST_CASE("draw_symbols: variance, determinism, degenerate V_M") {
    const std::size_t n = 1'200'000;
    const auto b1 = txdsp::draw_symbols(n, 9.41, 77);
    const auto b2 = txdsp::draw_symbols(n, 9.41, 77);
    for (std::size_t i = 0; i < 64; ++i) CHECK(b1.tx[i] == b2.tx[i]);

    const auto m = kernels::single_moments(std::span<const cplx>(b1.tx));
    CHECK(m.quad_variance() == doctest::Approx(9.41).epsilon(0.005));

    const auto z = txdsp::draw_symbols(16, 0.0, 1);
    for (const auto& s : z.tx) CHECK(std::abs(s) == 0.0);
}

TEST_CASE("shape_and_upsample: impulse response and loopback") {
    const auto h = txdsp::rrc_taps(0.2, 40, 8);
    SUBCASE("single unit symbol reproduces the taps") {
        std::vector<cplx> one = {cplx{1.0, 0.0}};
        const auto w = txdsp::shape_and_upsample(one, h, 8);
        REQUIRE(w.size() == h.size());
        for (std::size_t i = 0; i < h.size(); ++i)
            CHECK(w[i].real() == doctest::Approx(h[i]).epsilon(1e-12));
    }
    SUBCASE("plain matched-filter round trip leaves only truncation-level ISI") {
        const auto blk = txdsp::draw_symbols(4096, 4.0, 5);
        const auto w = txdsp::shape_and_upsample(std::span<const cplx>(blk.tx), h, 8);
        std::vector<cplx> mf(w.size() + h.size() - 1, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < w.size(); ++i)
            for (std::size_t j = 0; j < h.size(); ++j) mf[i + j] += w[i] * h[j];
        const std::size_t delay = 320;
        double rms = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 40; k + 40 < blk.tx.size(); ++k) {
            const cplx err = mf[delay + 8 * k] - blk.tx[k];
            rms += std::norm(err);
            ++count;
        }
        rms = std::sqrt(rms / static_cast<double>(count));
        // residual ISI of the truncated span-40 pair; the receive chain's
        // folded-spectrum normalization removes it (see test_rxdsp loopback)
        CHECK(rms < 2e-3);
    }
    SUBCASE("linearity of the chain") {
        const auto a = txdsp::draw_symbols(256, 1.0, 1).tx;
        const auto b = txdsp::draw_symbols(256, 1.0, 2).tx;
        std::vector<cplx> sum(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) sum[i] = 2.0 * a[i] + 3.0 * b[i];
        const auto wa = txdsp::shape_and_upsample(std::span<const cplx>(a), h, 8);
        const auto wb = txdsp::shape_and_upsample(std::span<const cplx>(b), h, 8);
        const auto ws = txdsp::shape_and_upsample(std::span<const cplx>(sum), h, 8);
        double max_err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < ws.size(); ++i) {
            max_err = std::max(max_err, std::abs(ws[i] - (2.0 * wa[i] + 3.0 * wb[i])));
            scale = std::max(scale, std::abs(ws[i]));
        }
        CHECK(max_err < 1e-9 * scale);
    }
}

TEST_CASE("ssb_shift: identity at zero, spectral peak, power preservation") {
    TxConfig cfg = small_cfg();
    cbuf w(cfg.frame_len, cplx{1.0, 0.0});  // tone at DC
    const double p0 = total_power(std::span<const cplx>(w.data(), w.size()));

    cbuf w0 = w;
    txdsp::ssb_shift(std::span<cplx>(w0.data(), w0.size()), 0.0, 1e9);
    for (std::size_t i = 0; i < 64; ++i) CHECK(w0[i] == w[i]);

    txdsp::ssb_shift(std::span<cplx>(w.data(), w.size()), 120e6, 1e9);
    CHECK(total_power(std::span<const cplx>(w.data(), w.size())) ==
          doctest::Approx(p0).epsilon(1e-9));
    cbuf spec = w;
    fft::forward(spec);
    std::size_t peak = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < spec.size(); ++k)
        if (std::norm(spec[k]) > best) {
            best = std::norm(spec[k]);
            peak = k;
        }
    CHECK(spectral::bin_freq(peak, spec.size(), 1e9) == doctest::Approx(120e6).epsilon(1e-6));

    CHECK_THROWS_AS(txdsp::ssb_shift(std::span<cplx>(w.data(), w.size()), 480e6, 1e9, 80e6),
                    AliasRisk);
}

TEST_CASE("add_pilot: single line, amplitude zero identity, band protection") {
    TxConfig cfg = small_cfg();
    cbuf w(cfg.frame_len, cplx{0.0, 0.0});
    txdsp::add_pilot(std::span<cplx>(w.data(), w.size()), 220e6, 2.5, 1e9);
    cbuf spec = w;
    fft::forward(spec);
    std::size_t peak = 0;
    double best = -1.0;
    double total = 0.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
        total += std::norm(spec[k]);
        if (std::norm(spec[k]) > best) {
            best = std::norm(spec[k]);
            peak = k;
        }
    }
    CHECK(spectral::bin_freq(peak, spec.size(), 1e9) == doctest::Approx(220e6).epsilon(1e-6));
    CHECK(best / total > 0.999);

    cbuf w2(16, cplx{0.5, 0.5});
    cbuf w3 = w2;
    txdsp::add_pilot(std::span<cplx>(w2.data(), w2.size()), 220e6, 0.0, 1e9);
    for (std::size_t i = 0; i < w2.size(); ++i) CHECK(w2[i] == w3[i]);

    CHECK_THROWS_AS(txdsp::add_pilot(std::span<cplx>(w.data(), w.size()), 150e6, 1.0, 1e9,
                                     120e6, 75e6),
                    SpectralOverlap);
}

TEST_CASE("pilot leaves the signal band untouched; quantum leakage into pilot band tiny") {
    TxConfig cfg = small_cfg();
    txdsp::TxFrame f = txdsp::make_frame(cfg, 9.41, 0, 99);
    const auto taps = txdsp::rrc_taps(cfg.rrc_rolloff, cfg.rrc_span_symbols,
                                      cfg.samples_per_symbol);
    const auto blk = txdsp::draw_symbols(cfg.symbols_per_frame(), 9.41,
                                         rng::frame_seed(99, 0));
    auto bare = txdsp::shape_and_upsample(std::span<const cplx>(blk.tx), taps,
                                          cfg.samples_per_symbol);
    bare.resize(cfg.frame_len, cplx{0.0, 0.0});
    txdsp::ssb_shift(std::span<cplx>(bare.data(), bare.size()), cfg.f_signal_hz,
                     cfg.dac_rate_hz, cfg.band_halfwidth_hz());

    cbuf sa = f.waveform, sb = bare;
    fft::forward(sa);
    fft::forward(sb);
    const std::size_t n = sa.size();
    double sig_with = 0.0, sig_without = 0.0, pilot_band_leak = 0.0, sig_total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double fr = spectral::bin_freq(k, n, cfg.dac_rate_hz);
        if (std::abs(fr - cfg.f_signal_hz) <= cfg.band_halfwidth_hz()) {
            sig_with += std::norm(sa[k]);
            sig_without += std::norm(sb[k]);
        }
        if (std::abs(fr - cfg.f_pilot_hz) <= 0.5e6) pilot_band_leak += std::norm(sb[k]);
        sig_total += std::norm(sb[k]);
    }
    CHECK(sig_with == doctest::Approx(sig_without).epsilon(1e-6));
    CHECK(pilot_band_leak / sig_total < 1e-6);  // < -60 dB
}

TEST_CASE("frame layout: symbols per frame and occupied band") {
    TxConfig cfg;  // full-size defaults
    CHECK(cfg.symbols_per_frame() == 1'249'960);
    CHECK(cfg.band_halfwidth_hz() == doctest::Approx(75e6));
    CHECK(cfg.n_taps() == 321);
    CHECK_NOTHROW(cfg.validate());
    cfg.f_pilot_hz = 190e6;  // inside the shaped band
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("make_frame is deterministic and frame-id dependent") {
    TxConfig cfg = small_cfg();
    const auto a = txdsp::make_frame(cfg, 4.0, 3, 1234);
    const auto b = txdsp::make_frame(cfg, 4.0, 3, 1234);
    const auto c = txdsp::make_frame(cfg, 4.0, 4, 1234);
    CHECK(a.waveform.size() == cfg.frame_len);
    for (std::size_t i = 0; i < 64; ++i) CHECK(a.waveform[i] == b.waveform[i]);
    bool differs = false;
    for (std::size_t i = 0; i < 64; ++i)
        if (a.waveform[i] != c.waveform[i]) differs = true;
    CHECK(differs);
}

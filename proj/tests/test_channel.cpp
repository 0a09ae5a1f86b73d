#include <cmath>

#include "cvqkd/channel.hpp"
#include "doctest.h"

using namespace cvqkd;

namespace {

ChannelScenario small_scenario() {
    ChannelScenario sc;
    sc.params.v_mod = 9.41;
    sc.params.eta = 0.0184;
    sc.params.xi = 0.760e-3;
    sc.params.tau = 0.685;
    sc.params.v_el = 19.25e-3;
    sc.params.delta_f_hz = -240e6;
    sc.seed = 321;
    return sc;
}

TxConfig small_tx() {
    TxConfig cfg;
    cfg.frame_len = 1 << 19;
    return cfg;
}

double quad_var(std::span<const cplx> x) {
    return kernels::single_moments(x).quad_variance();
}

// signed frequency of bin k on an n-point grid at 1 GS/s
double test_bin_freq(std::size_t k, std::size_t n) {
    const double kk = static_cast<double>(k), nn = static_cast<double>(n);
    const double cyc = (kk <= nn / 2.0) ? kk / nn : (kk - nn) / nn;
    return cyc * 1e9;
}

}  // namespace

TEST_CASE("apply_loss scales power by eta") {
    std::vector<cplx> v(1 << 16);
    kernels::gaussian_fill(std::span<cplx>(v), 1.0, 5, rng::Stream::misc);
    const double p0 = quad_var(std::span<const cplx>(v));
    auto w = v;
    channel::apply_loss(std::span<cplx>(w), 0.0096);
    CHECK(quad_var(std::span<const cplx>(w)) == doctest::Approx(0.0096 * p0).epsilon(1e-12));
    channel::apply_loss(std::span<cplx>(v), 1.0);  // identity
    CHECK(v[0] == v[0]);
}

TEST_CASE("wiener phase noise: unit modulus and ensemble variance growth") {
    const double fs = 1e9;
    const double lw = 1e5;  // large linewidth so the variance is measurable
    const std::size_t n = 1000;
    const std::size_t paths = 10'000;
    double acc = 0.0;
    for (std::size_t pth = 0; pth < paths; ++pth) {
        std::vector<double> theta(n);
        kernels::wiener_phase(theta, 2.0 * 3.14159265358979324 * lw / fs, 1000 + pth,
                              rng::Stream::phase);
        acc += theta[n - 1] * theta[n - 1];
    }
    const double expect = 2.0 * 3.14159265358979324 * lw * static_cast<double>(n - 1) / fs;
    CHECK(acc / static_cast<double>(paths) == doctest::Approx(expect).epsilon(0.05));

    std::vector<cplx> v(1 << 12, cplx{0.6, -0.8});
    channel::apply_phase_noise(std::span<cplx>(v), 200.0, fs, 9);
    for (const auto& s : v) CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-12));

    auto w = v;
    channel::apply_phase_noise(std::span<cplx>(w), 0.0, fs, 9);  // identity
    for (std::size_t i = 0; i < 32; ++i) CHECK(w[i] == v[i]);
}

TEST_CASE("frequency offset: identity, composition, alias guard") {
    std::vector<cplx> v(1 << 12);
    kernels::gaussian_fill(std::span<cplx>(v), 1.0, 3, rng::Stream::misc);
    auto a = v;
    channel::apply_frequency_offset(std::span<cplx>(a), 0.0, 1e9);
    for (std::size_t i = 0; i < 32; ++i) CHECK(a[i] == v[i]);

    auto b = v;
    channel::apply_frequency_offset(std::span<cplx>(b), 31e6, 1e9);
    channel::apply_frequency_offset(std::span<cplx>(b), -13e6, 1e9);
    auto c = v;
    channel::apply_frequency_offset(std::span<cplx>(c), 18e6, 1e9);
    double max_err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        max_err = std::max(max_err, std::abs(b[i] - c[i]));
    CHECK(max_err < 1e-9);

    CHECK_THROWS_AS(channel::apply_frequency_offset(std::span<cplx>(v), 400e6, 1e9, 220e6),
                    AliasRisk);
}

TEST_CASE("heterodyne detection noise budget") {
    ChannelScenario sc = small_scenario();
    const std::size_t n = 1 << 21;
    SUBCASE("vacuum only: unit shot variance in SNU units") {
        sc.params.tau = 1.0;
        sc.params.v_el = 0.0;
        sc.adc_gain = 1.0;
        cbuf x(n, cplx{0.0, 0.0});
        channel::detect_heterodyne(x, 1.0, 0.0, 250e6, 1.0, 1e9, 77);
        // detector response shaves off a little in-band power; the full-band
        // variance equals the integrated |H|^2 plus nothing else
        double hsum = 0.0;
        for (std::size_t k = 0; k < 512; ++k) {
            const double f = test_bin_freq(k, 512);
            hsum += channel::detector_response2(f, 250e6);
        }
        hsum /= 512.0;
        CHECK(quad_var(std::span<const cplx>(x.data(), x.size())) ==
              doctest::Approx(hsum).epsilon(0.01));
    }
    SUBCASE("electronic-only variance ratio matches V_el") {
        cbuf vac(n, cplx{0.0, 0.0});
        channel::detect_heterodyne(vac, 0.685, 19.25e-3, 250e6, 6.5, 1e9, 78);
        cbuf el = channel::electronic_frame(sc, n, 0);
        const double r = quad_var(std::span<const cplx>(el.data(), el.size())) /
                         (quad_var(std::span<const cplx>(vac.data(), vac.size())) -
                          quad_var(std::span<const cplx>(el.data(), el.size())));
        CHECK(r == doctest::Approx(0.01925 / 0.97).epsilon(0.05));
    }
    SUBCASE("signal scales by tau while shot noise stays fixed") {
        cbuf strong(n, cplx{10.0, 0.0});
        channel::detect_heterodyne(strong, 0.5, 0.0, 250e6, 1.0, 1e9, 79);
        double mean_re = 0.0;
        for (const auto& s : strong) mean_re += s.real();
        mean_re /= static_cast<double>(n);
        CHECK(mean_re == doctest::Approx(10.0 * std::sqrt(0.5)).epsilon(0.01));
    }
}

TEST_CASE("excess noise injection: zero identity and linear recovery at symbol level") {
    TxConfig tx = small_tx();
    ChannelScenario sc = small_scenario();

    const auto taps = txdsp::rrc_taps(tx.rrc_rolloff, tx.rrc_span_symbols,
                                      tx.samples_per_symbol);
    auto frame = txdsp::make_frame(tx, 0.0, 0, 5);  // zero modulation carrier frame

    cbuf w0 = frame.waveform;
    channel::add_excess_noise(std::span<cplx>(w0.data(), w0.size()), 0.0, tx, 3);
    for (std::size_t i = 0; i < 32; ++i) CHECK(w0[i] == frame.waveform[i]);

    // measure the injected in-band noise through a matched filter: the
    // symbol-rate variance should equal xi per quadrature (linearly in xi)
    auto measure = [&](double xi) {
        cbuf w(tx.frame_len, cplx{0.0, 0.0});
        channel::add_excess_noise(std::span<cplx>(w.data(), w.size()), xi, tx, 3);
        txdsp::ssb_shift(std::span<cplx>(w.data(), w.size()), -tx.f_signal_hz,
                         tx.dac_rate_hz, tx.band_halfwidth_hz());
        // direct decimating matched filter
        const std::size_t n_sym = tx.symbols_per_frame();
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 40; i + 40 < n_sym; i += 7) {
            cplx s{0.0, 0.0};
            const std::size_t base = i * tx.samples_per_symbol;
            for (std::size_t j = 0; j < taps.size() && base + j < w.size(); ++j)
                s += taps[j] * w[base + j];
            acc += std::norm(s);
            ++cnt;
        }
        return acc / (2.0 * static_cast<double>(cnt));
    };
    const double m1 = measure(1e-2);
    const double m2 = measure(2e-2);
    CHECK(m1 == doctest::Approx(1e-2).epsilon(0.05));
    CHECK(m2 == doctest::Approx(2.0 * m1).epsilon(0.05));
}

TEST_CASE("simulate_link: seeded reproducibility and commuting loss/offset") {
    TxConfig tx = small_tx();
    ChannelScenario sc = small_scenario();
    sc.fs_hz = tx.dac_rate_hz;
    const auto frame = txdsp::make_frame(tx, sc.params.v_mod, 0, sc.seed);
    const cbuf a = channel::simulate_link(frame.waveform, sc, tx, 0);
    const cbuf b = channel::simulate_link(frame.waveform, sc, tx, 0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(a[i] == b[i]);

    // loss and frequency offset commute
    std::vector<cplx> x(1 << 14);
    kernels::gaussian_fill(std::span<cplx>(x), 1.0, 5, rng::Stream::misc);
    auto p = x;
    channel::apply_loss(std::span<cplx>(p), 0.25);
    channel::apply_frequency_offset(std::span<cplx>(p), 12e6, 1e9);
    auto q = x;
    channel::apply_frequency_offset(std::span<cplx>(q), 12e6, 1e9);
    channel::apply_loss(std::span<cplx>(q), 0.25);
    double max_err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        max_err = std::max(max_err, std::abs(p[i] - q[i]));
    CHECK(max_err < 1e-12);
}

TEST_CASE("all-identity scenario reduces to tx plus unit shot noise") {
    TxConfig tx = small_tx();
    ChannelScenario sc;
    sc.params.v_mod = 4.0;
    sc.params.eta = 1.0;
    sc.params.xi = 0.0;
    sc.params.tau = 1.0;
    sc.params.v_el = 0.0;
    sc.params.linewidth_tx_hz = 0.0;
    sc.params.linewidth_rx_hz = 0.0;
    sc.params.delta_f_hz = 0.0;
    sc.detector_bw_hz = 1e12;  // flat response
    sc.adc_gain = 1.0;
    sc.fs_hz = tx.dac_rate_hz;
    sc.seed = 9;
    const auto frame = txdsp::make_frame(tx, sc.params.v_mod, 0, 9);
    const cbuf rx = channel::simulate_link(frame.waveform, sc, tx, 0);
    std::vector<cplx> diff(rx.size());
    for (std::size_t i = 0; i < rx.size(); ++i) diff[i] = rx[i] - frame.waveform[i];
    CHECK(quad_var(std::span<const cplx>(diff)) == doctest::Approx(1.0).epsilon(0.01));
}

#include "cvqkd/channel.hpp"

#include <cmath>

#include "cvqkd/fft.hpp"
#include "cvqkd/spectral.hpp"

namespace cvqkd {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

void ChannelScenario::validate() const {
    params.validate();
    if (!(fs_hz > 0.0)) throw ConfigError("ChannelScenario.fs_hz must be positive");
    if (raman_noise < 0.0) throw ConfigError("ChannelScenario.raman_noise must be >= 0");
    if (!(detector_bw_hz > 0.0)) throw ConfigError("ChannelScenario.detector_bw_hz must be positive");
    if (!(adc_gain > 0.0)) throw ConfigError("ChannelScenario.adc_gain must be positive");
}

namespace channel {

void apply_loss(std::span<cplx> waveform, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("apply_loss: eta must be in (0, 1]");
    if (eta == 1.0) return;
    kernels::scale(waveform, std::sqrt(eta));
}

void apply_phase_noise(std::span<cplx> waveform, double combined_linewidth_hz,
                       double fs_hz, std::uint64_t frame_seed) {
    if (combined_linewidth_hz < 0.0)
        throw ConfigError("apply_phase_noise: linewidth must be >= 0");
    if (combined_linewidth_hz == 0.0) return;
    const double q = kTwoPi * combined_linewidth_hz / fs_hz;
    std::vector<double> theta(waveform.size());
    kernels::wiener_phase(theta, q, frame_seed, rng::Stream::phase);
    kernels::apply_phase(waveform, theta, +1.0);
}

void apply_frequency_offset(std::span<cplx> waveform, double delta_f_hz, double fs_hz,
                            double occupied_max_abs_freq_hz) {
    if (std::abs(delta_f_hz) + occupied_max_abs_freq_hz >= fs_hz / 2.0)
        throw AliasRisk("apply_frequency_offset: band crosses Nyquist");
    if (delta_f_hz == 0.0) return;
    kernels::rotate_tone(waveform, delta_f_hz / fs_hz, 0.0);
}

void add_excess_noise(std::span<cplx> waveform, double xi, const TxConfig& tx,
                      std::uint64_t frame_seed) {
    if (xi < 0.0) throw ConfigError("add_excess_noise: xi must be >= 0");
    if (xi == 0.0) return;
    const std::size_t n_sym = tx.symbols_per_frame();
    std::vector<cplx> noise_syms(n_sym);
    kernels::gaussian_fill(std::span<cplx>(noise_syms), std::sqrt(xi), frame_seed,
                           rng::Stream::excess);
    const auto taps = txdsp::rrc_taps(tx.rrc_rolloff, tx.rrc_span_symbols,
                                      tx.samples_per_symbol);
    cbuf shaped = txdsp::shape_and_upsample(std::span<const cplx>(noise_syms), taps,
                                            tx.samples_per_symbol);
    shaped.resize(waveform.size(), cplx{0.0, 0.0});
    txdsp::ssb_shift(std::span<cplx>(shaped.data(), shaped.size()), tx.f_signal_hz,
                     tx.dac_rate_hz, tx.band_halfwidth_hz());

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(waveform.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        waveform[static_cast<std::size_t>(k)] += shaped[static_cast<std::size_t>(k)];
}

double detector_response2(double f_hz, double bw_hz) {
    const double r = f_hz / bw_hz;
    const double r2 = r * r;
    const double r4 = r2 * r2;
    return 1.0 / (1.0 + r4 * r4);
}

namespace {

// Apply |H(f)| in the frequency domain (zero phase).
void apply_detector_response(cbuf& x, double bw_hz, double fs_hz) {
    fft::forward(x);
    const std::size_t n = x.size();
    const std::ptrdiff_t nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < nn; ++k) {
        const double f = spectral::bin_freq(static_cast<std::size_t>(k), n, fs_hz);
        x[static_cast<std::size_t>(k)] *= std::sqrt(detector_response2(f, bw_hz));
    }
    fft::inverse(x);
}

}  // namespace

void detect_heterodyne(cbuf& waveform, double tau, double v_el, double detector_bw_hz,
                       double adc_gain, double fs_hz, std::uint64_t frame_seed) {
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("detect_heterodyne: tau in (0, 1]");
    if (v_el < 0.0) throw ConfigError("detect_heterodyne: v_el must be >= 0");
    std::span<cplx> buf(waveform.data(), waveform.size());
    kernels::scale(buf, std::sqrt(tau));
    // shot noise arises in the photocurrent: added before the detector response
    kernels::add_gaussian(buf, 1.0, frame_seed, rng::Stream::shot);
    apply_detector_response(waveform, detector_bw_hz, fs_hz);
    if (v_el > 0.0)
        kernels::add_gaussian(buf, std::sqrt(v_el), frame_seed, rng::Stream::electronic);
    kernels::scale(buf, adc_gain);
}

cbuf simulate_link(const cbuf& tx_waveform, const ChannelScenario& sc, const TxConfig& tx,
                   std::uint64_t frame_id) {
    sc.validate();
    const std::uint64_t fseed = rng::frame_seed(sc.seed, frame_id);
    cbuf rx = tx_waveform;
    std::span<cplx> buf(rx.data(), rx.size());

    apply_loss(buf, sc.params.eta);
    add_excess_noise(buf, sc.params.xi, tx, fseed);
    if (sc.raman_noise > 0.0)
        kernels::add_gaussian(buf, std::sqrt(sc.raman_noise), fseed, rng::Stream::raman);
    apply_phase_noise(buf, sc.params.combined_linewidth_hz(), sc.fs_hz, fseed);
    apply_frequency_offset(buf, sc.params.delta_f_hz, sc.fs_hz,
                           tx.f_pilot_hz > 0.0 ? tx.f_pilot_hz : 0.0);
    detect_heterodyne(rx, sc.params.tau, sc.params.v_el, sc.detector_bw_hz, sc.adc_gain,
                      sc.fs_hz, fseed);
    return rx;
}

cbuf vacuum_frame(const ChannelScenario& sc, std::size_t n, std::uint64_t frame_id) {
    cbuf x(n, cplx{0.0, 0.0});
    detect_heterodyne(x, sc.params.tau, sc.params.v_el, sc.detector_bw_hz, sc.adc_gain,
                      sc.fs_hz, rng::frame_seed(sc.seed ^ 0xCA11B7A7E0000001ULL, frame_id));
    return x;
}

cbuf electronic_frame(const ChannelScenario& sc, std::size_t n, std::uint64_t frame_id) {
    cbuf x(n, cplx{0.0, 0.0});
    const std::uint64_t fseed =
        rng::frame_seed(sc.seed ^ 0xCA11B7A7E0000002ULL, frame_id);
    if (sc.params.v_el > 0.0)
        kernels::add_gaussian(std::span<cplx>(x.data(), x.size()),
                              std::sqrt(sc.params.v_el), fseed, rng::Stream::electronic);
    kernels::scale(std::span<cplx>(x.data(), x.size()), sc.adc_gain);
    return x;
}

}  // namespace channel
}  // namespace cvqkd

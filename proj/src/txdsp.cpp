#include "cvqkd/txdsp.hpp"

#include <cmath>
#include <string>

namespace cvqkd {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

void TxConfig::validate() const {
    auto bad = [](const std::string& field, const std::string& why) {
        throw ConfigError("TxConfig." + field + ": " + why);
    };
    if (samples_per_symbol == 0) bad("samples_per_symbol", "must be positive");
    if (std::abs(dac_rate_hz - symbol_rate_hz * static_cast<double>(samples_per_symbol)) >
        1e-6 * dac_rate_hz)
        bad("dac_rate_hz", "must equal symbol_rate * samples_per_symbol");
    if (!(rrc_rolloff > 0.0 && rrc_rolloff < 1.0)) bad("rrc_rolloff", "must be in (0, 1)");
    if (rrc_span_symbols < 2) bad("rrc_span_symbols", "too short");
    if (frame_len <= rrc_span_symbols * samples_per_symbol)
        bad("frame_len", "shorter than the filter span");
    if (frame_len % samples_per_symbol != 0)
        bad("frame_len", "must be a multiple of samples_per_symbol");
    if (!(f_pilot_hz < dac_rate_hz / 2.0)) bad("f_pilot_hz", "beyond Nyquist");
    const double band_edge = f_signal_hz + band_halfwidth_hz();
    if (!(band_edge < f_pilot_hz))
        bad("f_signal_hz", "shaped band must clear the pilot tone");
    if (pilot_amplitude < 0.0) bad("pilot_amplitude", "must be >= 0");
}

double TxConfig::default_pilot_amplitude(double v_mod) const {
    // 20 dB above the mean per-symbol quantum signal power (2 V_M complex)
    return std::sqrt(100.0 * 2.0 * v_mod);
}

namespace txdsp {

SymbolBlock draw_symbols(std::size_t n, double v_mod, std::uint64_t frame_seed) {
    if (n == 0) throw ConfigError("draw_symbols: n must be positive");
    if (v_mod < 0.0) throw ConfigError("draw_symbols: v_mod must be >= 0");
    SymbolBlock b;
    b.tx.resize(n);
    kernels::gaussian_fill(std::span<cplx>(b.tx), std::sqrt(v_mod), frame_seed,
                           rng::Stream::symbols);
    return b;
}

std::vector<double> rrc_taps(double rolloff, std::size_t span_symbols, std::size_t sps) {
    const std::size_t n = span_symbols * sps + 1;
    std::vector<double> h(n);
    const double b = rolloff;
    const std::ptrdiff_t mid = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(static_cast<std::ptrdiff_t>(i) - mid) /
                         static_cast<double>(sps);
        const double den = 1.0 - 16.0 * b * b * t * t;
        double v;
        if (t == 0.0) {
            v = 1.0 + b * (4.0 / kPi - 1.0);
        } else if (std::abs(den) < 1e-12) {
            const double a = kPi / (4.0 * b);
            v = b / std::sqrt(2.0) *
                ((1.0 + 2.0 / kPi) * std::sin(a) + (1.0 - 2.0 / kPi) * std::cos(a));
        } else {
            v = (std::sin(kPi * t * (1.0 - b)) +
                 4.0 * b * t * std::cos(kPi * t * (1.0 + b))) /
                (kPi * t * den);
        }
        h[i] = v;
    }
    // force exact symmetry, then unit energy
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double s = 0.5 * (h[i] + h[n - 1 - i]);
        h[i] = s;
        h[n - 1 - i] = s;
    }
    double e = 0.0;
    for (double v : h) e += v * v;
    const double scale = 1.0 / std::sqrt(e);
    for (double& v : h) v *= scale;
    return h;
}

cbuf shape_and_upsample(std::span<const cplx> symbols, std::span<const double> taps,
                        std::size_t sps) {
    cbuf out((symbols.size() - 1) * sps + taps.size());
    kernels::fir_upsample(symbols, taps, sps, std::span<cplx>(out.data(), out.size()));
    return out;
}

void ssb_shift(std::span<cplx> waveform, double f_shift_hz, double fs_hz,
               double occupied_halfwidth_hz) {
    if (std::abs(f_shift_hz) + occupied_halfwidth_hz >= fs_hz / 2.0)
        throw AliasRisk("ssb_shift: shifted band crosses Nyquist");
    if (f_shift_hz == 0.0) return;
    kernels::rotate_tone(waveform, f_shift_hz / fs_hz, 0.0);
}

void add_pilot(std::span<cplx> waveform, double f_pilot_hz, double amplitude,
               double fs_hz, double f_signal_hz, double band_halfwidth_hz) {
    if (std::abs(f_pilot_hz) >= fs_hz / 2.0)
        throw AliasRisk("add_pilot: pilot beyond Nyquist");
    if (band_halfwidth_hz > 0.0 &&
        std::abs(f_pilot_hz - f_signal_hz) <= band_halfwidth_hz)
        throw SpectralOverlap("add_pilot: pilot inside the shaped signal band");
    if (amplitude == 0.0) return;
    const double m = f_pilot_hz / fs_hz;
    const std::ptrdiff_t nc =
        static_cast<std::ptrdiff_t>(kernels::num_chunks(waveform.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kernels::kChunk;
        const std::size_t hi = std::min(lo + kernels::kChunk, waveform.size());
        for (std::size_t k = lo; k < hi; ++k) {
            double cyc = m * static_cast<double>(k);
            cyc -= std::floor(cyc);
            const double a = 2.0 * kPi * cyc;
            waveform[k] += amplitude * cplx{std::cos(a), std::sin(a)};
        }
    }
}

TxFrame make_frame(const TxConfig& cfg, double v_mod, std::uint64_t frame_id,
                   std::uint64_t master_seed) {
    cfg.validate();
    const std::uint64_t fseed = rng::frame_seed(master_seed, frame_id);
    TxFrame f;
    f.symbols = draw_symbols(cfg.symbols_per_frame(), v_mod, fseed);
    f.symbols.frame_id = frame_id;

    const auto taps = rrc_taps(cfg.rrc_rolloff, cfg.rrc_span_symbols, cfg.samples_per_symbol);
    f.waveform = shape_and_upsample(std::span<const cplx>(f.symbols.tx), taps,
                                    cfg.samples_per_symbol);
    // (n_sym - 1) * sps + span * sps + 1 samples; pad to exactly frame_len
    f.waveform.resize(cfg.frame_len, cplx{0.0, 0.0});

    ssb_shift(std::span<cplx>(f.waveform.data(), f.waveform.size()), cfg.f_signal_hz,
              cfg.dac_rate_hz, cfg.band_halfwidth_hz());
    const double amp =
        cfg.pilot_amplitude > 0.0 ? cfg.pilot_amplitude : cfg.default_pilot_amplitude(v_mod);
    add_pilot(std::span<cplx>(f.waveform.data(), f.waveform.size()), cfg.f_pilot_hz, amp,
              cfg.dac_rate_hz, cfg.f_signal_hz, cfg.band_halfwidth_hz());
    return f;
}

}  // namespace txdsp
}  // namespace cvqkd

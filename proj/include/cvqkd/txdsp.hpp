#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/fft.hpp"
#include "cvqkd/kernels.hpp"

namespace cvqkd {

struct TxConfig {
    double symbol_rate_hz = 125e6;
    double dac_rate_hz = 1e9;
    std::size_t samples_per_symbol = 8;   // dac_rate / symbol_rate
    double rrc_rolloff = 0.2;
    std::size_t rrc_span_symbols = 40;    // 321 taps at sps = 8
    double f_signal_hz = 120e6;
    double f_pilot_hz = 220e6;
    double pilot_amplitude = 0.0;         // linear; 0 selects the default 20 dB above signal
    std::size_t frame_len = 10'000'000;
    std::uint64_t seed = 1;

    void validate() const;
    std::size_t n_taps() const { return rrc_span_symbols * samples_per_symbol + 1; }
    // symbols that fit a frame: frame_len = n_sym * sps + span * sps
    std::size_t symbols_per_frame() const {
        return (frame_len - rrc_span_symbols * samples_per_symbol) / samples_per_symbol;
    }
    std::size_t edge_trim_symbols() const { return rrc_span_symbols / 2; }
    // one-sided occupied band edge of the shaped signal around f_signal
    double band_halfwidth_hz() const {
        return 0.5 * (1.0 + rrc_rolloff) * symbol_rate_hz;
    }
    double default_pilot_amplitude(double v_mod) const;
};

// Paired transmitted / received quantum symbols in SNU.
struct SymbolBlock {
    std::vector<cplx> tx;
    std::vector<cplx> rx;  // empty until the receiver DSP fills it
    std::uint64_t frame_id = 0;

    std::size_t count() const { return tx.size(); }
};

namespace txdsp {

// i.i.d. complex Gaussian symbols, per-quadrature variance v_mod.
SymbolBlock draw_symbols(std::size_t n, double v_mod, std::uint64_t frame_seed);

// Unit-energy root-raised-cosine taps, length span*sps + 1, symmetric.
std::vector<double> rrc_taps(double rolloff, std::size_t span_symbols, std::size_t sps);

// Zero-stuffed upsampling + pulse shaping. Output length n*sps + span*sps.
cbuf shape_and_upsample(std::span<const cplx> symbols, std::span<const double> taps,
                        std::size_t sps);

// In-place single-sideband shift by f_shift. Throws AliasRisk when the
// occupied band would cross Nyquist.
void ssb_shift(std::span<cplx> waveform, double f_shift_hz, double fs_hz,
               double occupied_halfwidth_hz = 0.0);

// In-place pilot tone addition. Throws SpectralOverlap when the pilot falls
// inside the shaped signal band.
void add_pilot(std::span<cplx> waveform, double f_pilot_hz, double amplitude,
               double fs_hz, double f_signal_hz = 0.0, double band_halfwidth_hz = 0.0);

// Full transmit chain for one frame: draw, shape, shift, pilot.
struct TxFrame {
    SymbolBlock symbols;
    cbuf waveform;  // exactly cfg.frame_len samples
};
TxFrame make_frame(const TxConfig& cfg, double v_mod, std::uint64_t frame_id,
                   std::uint64_t master_seed);

}  // namespace txdsp
}  // namespace cvqkd

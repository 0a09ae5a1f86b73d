#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cvqkd/snu.hpp"
#include "cvqkd/txdsp.hpp"

namespace cvqkd {

struct UkfConfig {
    double process_noise_var = 1e-6;      // rad^2 per pilot sample; from combined linewidth
    double measurement_noise_var = 0.0;   // per-quadrature; 0 = derive from measured pilot SNR
    double init_phase_var = 0.5;          // rad^2
    double alpha = 1.0;                   // sigma-point spread
    double beta = 2.0;
    double kappa = 2.0;
    double divergence_threshold = 25.0;   // windowed mean normalized innovation^2
    std::size_t divergence_window = 256;

    void validate() const;
};

struct PhaseTrack {
    double freq_offset_hat_hz = 0.0;      // net offset of the received frame
    std::vector<double> phase_trajectory; // radians, one per pilot-rate sample
    std::size_t decimation = 1;           // full-rate samples per trajectory sample
    double fs_hz = 1e9;                   // full sample rate
    double pilot_snr_hat_db = 0.0;        // in the pilot bandwidth
    double residual_phase_var = 0.0;      // steady-state posterior variance, rad^2
};

// Extracted narrowband pilot: brickwall band around the located tone,
// decimated to the band rate (group delay exactly zero by construction).
struct Pilot {
    std::vector<cplx> samples;    // at fs_dec
    double fs_dec_hz = 1e6;
    double f_center_hz = 0.0;     // absolute frequency mapped to DC
    double pilot_power = 0.0;     // tone power in band units
    double noise_power = 0.0;     // noise power in an equal off-tone band
    double snr() const { return noise_power > 0.0 ? pilot_power / noise_power : 0.0; }
};

// Frequency-domain gains that flatten the calibrated shot-noise spectrum
// (vacuum PSD minus electronic PSD), identity outside the equalization band.
class Equalizer {
  public:
    Equalizer() = default;
    Equalizer(const CalibrationRecord& cal, double eq_band_hz = 300e6);

    // gains resampled onto an n-bin circular grid at fs
    std::vector<double> gains(std::size_t n, double fs_hz) const;
    bool empty() const { return seg_gain_.empty(); }

  private:
    std::vector<double> seg_gain_;  // on the calibration psd grid
    double fs_hz_ = 1e9;
};

struct FrameDiag {
    std::uint64_t frame_index = 0;
    double freq_offset_hz = 0.0;
    double pilot_snr_db = 0.0;
    double residual_phase_var = 0.0;
    std::uint64_t n_symbols = 0;
    std::ptrdiff_t sync_lag = 0;
    double gain_mag = 0.0;   // |g|, g the complex LS gain vs tx
    double gain_phase = 0.0; // arg(g) removed as the phase reference
};

// Symbol-level SNU normalization measured by running calibration frames
// through the same DSP chain.
struct SymbolCalibration {
    double shot_variance = 1.0;  // per-quadrature shot-only variance at symbol level
    double v_el_sym = 0.0;       // electronic noise in symbol-level SNU
};

namespace rxdsp {

// Standalone whitening (spec contract); process pipelines fuse this with the
// frame FFT.
void whitening_filter(cbuf& frame, const CalibrationRecord& cal, double fs_hz);

Pilot extract_pilot(const cbuf& frame, double fs_hz, double f_expected_hz,
                    double bandwidth_hz = 1e6, double search_halfwidth_hz = 30e6,
                    double min_snr_db = 10.0);

// Least-squares slope of the unwrapped phase; returns Hz relative to the
// pilot stream's DC.
double estimate_freq_offset(std::span<const cplx> pilot, double fs_hz);

// Scalar UKF over the random-walk phase with phasor measurements.
PhaseTrack ukf_phase_track(std::span<const cplx> pilot, double fs_pilot_hz,
                           const UkfConfig& cfg, double amplitude_hint = 0.0);

struct DemodResult {
    SymbolBlock block;  // tx copied from input, rx filled, SNU when cal given
    FrameDiag diag;
};

// Receiver chain for one frame. Holds the cached taps, matched-filter
// response and equalizer gains; reusable across frames.
class FrameProcessor {
  public:
    FrameProcessor(const TxConfig& tx, std::optional<Equalizer> eq, UkfConfig ukf);

    // Full data path: whiten, locate pilot, estimate offset, track phase,
    // downconvert, matched-filter, align against tx, normalize to SNU.
    DemodResult process(const cbuf& rx_frame, const SymbolBlock& tx_symbols,
                        double f_pilot_expected_hz,
                        const std::optional<SymbolCalibration>& sym_cal);

    // Calibration path: same spectral chain without pilot/phase tracking;
    // returns the per-quadrature symbol variance of the frame.
    double symbol_variance(const cbuf& cal_frame, double f_dc_hz);

    // Matched filter + downsample of an already baseband frame (loopback tests).
    std::vector<cplx> matched_downsample(const cbuf& baseband);

    const TxConfig& tx() const { return tx_; }

  private:
    cbuf whiten_fft(const cbuf& frame);  // returns spectrum after equalizer gains
    std::vector<cplx> demod_core(cbuf&& spectrum, double f_dc_hz, const PhaseTrack* track);

    TxConfig tx_;
    std::optional<Equalizer> eq_;
    UkfConfig ukf_;
    std::vector<double> taps_;
    std::vector<double> eq_gains_;       // cached for frame_len
    cbuf mf_response_;                   // FFT of zero-padded taps
};

SymbolCalibration calibrate_symbol_units(FrameProcessor& proc,
                                         std::span<const cbuf> vacuum_frames,
                                         std::span<const cbuf> electronic_frames,
                                         double f_dc_hz);

}  // namespace rxdsp
}  // namespace cvqkd

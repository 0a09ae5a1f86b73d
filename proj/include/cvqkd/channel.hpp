#pragma once

#include <cstdint>

#include "cvqkd/snu.hpp"
#include "cvqkd/txdsp.hpp"

namespace cvqkd {

struct ChannelScenario {
    ChannelParams params;
    double fs_hz = 1e9;
    double raman_noise = 0.0;       // optional additive white noise, SNU per quadrature
    double detector_bw_hz = 250e6;  // balanced-detector 3 dB bandwidth
    double adc_gain = 6.5;          // raw units per sqrt(SNU); exercised by calibration
    std::uint64_t seed = 1;

    void validate() const;
};

namespace channel {

// amplitude *= sqrt(eta)
void apply_loss(std::span<cplx> waveform, double eta);

// Wiener laser phase noise: per-sample increment variance 2*pi*linewidth/fs.
void apply_phase_noise(std::span<cplx> waveform, double combined_linewidth_hz,
                       double fs_hz, std::uint64_t frame_seed);

// Deterministic e^{i 2 pi delta_f t} rotation.
void apply_frequency_offset(std::span<cplx> waveform, double delta_f_hz, double fs_hz,
                            double occupied_max_abs_freq_hz = 0.0);

// In-band excess noise at the channel output: RRC-shaped noise symbols with
// per-quadrature variance xi on the same signal carrier, so the symbol-rate
// measurement sees exactly xi per quadrature.
void add_excess_noise(std::span<cplx> waveform, double xi, const TxConfig& tx,
                      std::uint64_t frame_seed);

// Trusted heterodyne detection at the analytic-signal level: signal scaled by
// sqrt(tau), unit-variance vacuum added per quadrature, both shaped by the
// detector response, then white electronic noise of variance v_el and the
// raw-unit ADC gain. The heterodyne factor-of-two penalty is carried in the
// security module, not here.
void detect_heterodyne(cbuf& waveform, double tau, double v_el, double detector_bw_hz,
                       double adc_gain, double fs_hz, std::uint64_t frame_seed);

// Detector magnitude response (4th-order Butterworth, zero phase).
double detector_response2(double f_hz, double bw_hz);  // |H|^2

// Full channel for one frame: loss -> excess noise (-> raman) -> phase noise
// -> frequency offset -> detection. Deterministic given (seed, frame_id).
cbuf simulate_link(const cbuf& tx_waveform, const ChannelScenario& sc, const TxConfig& tx,
                   std::uint64_t frame_id);

// Calibration frames from the same detector model: vacuum (LO on, signal
// blocked) and electronic (LO and signal blocked).
cbuf vacuum_frame(const ChannelScenario& sc, std::size_t n, std::uint64_t frame_id);
cbuf electronic_frame(const ChannelScenario& sc, std::size_t n, std::uint64_t frame_id);

}  // namespace channel
}  // namespace cvqkd

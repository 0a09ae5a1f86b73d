#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/errors.hpp"

namespace cvqkd {

// Shot-noise-unit convention: vacuum quadrature variance = 1 SNU, a coherent
// state of amplitude a has quadrature means (2 Re a, 2 Im a), and Gaussian
// modulation of variance V_M means each quadrature is modulated at variance
// V_M (thermal-equivalent V = V_M + 1).

// Vacuum / electronic noise statistics in raw detector units. The
// normalization factor (vacuum - electronic) defines 1 SNU of variance.
struct CalibrationRecord {
    double vacuum_variance_raw = 0.0;
    double electronic_variance_raw = 0.0;
    std::vector<double> vacuum_psd;      // per-bin variance share, circular grid
    std::vector<double> electronic_psd;  // same grid; needed by the shot-referenced equalizer
    std::uint64_t n_samples = 0;
    std::size_t psd_nfft = 1 << 14;
    double fs_hz = 1e9;

    double normalization() const {
        return vacuum_variance_raw - electronic_variance_raw;
    }
    // electronic noise expressed in SNU
    double v_el_snu() const {
        return electronic_variance_raw / normalization();
    }
};

// Table-style channel and trusted-receiver parameters, all noise terms in SNU.
// xi is referenced to the channel output (already back-propagated with tau).
struct ChannelParams {
    double v_mod = 1.0;        // modulation variance per quadrature, SNU
    double eta = 1.0;          // untrusted channel transmittance
    double xi = 0.0;           // excess noise at channel output, SNU
    double tau = 1.0;          // trusted detector efficiency
    double v_el = 0.0;         // trusted electronic noise, SNU
    double linewidth_tx_hz = 100.0;
    double linewidth_rx_hz = 100.0;
    double delta_f_hz = 0.0;   // LO frequency offset applied to the detected frame

    void validate() const;
    double combined_linewidth_hz() const { return linewidth_tx_hz + linewidth_rx_hz; }
};

namespace snu {

// Average per-quadrature variances and Welch PSDs over the given frames.
// Throws DegenerateCalibration when the vacuum variance does not exceed the
// electronic variance.
CalibrationRecord calibrate(std::span<const std::vector<std::complex<double>>> vacuum_frames,
                            std::span<const std::vector<std::complex<double>>> electronic_frames,
                            double fs_hz, std::size_t psd_nfft = 1 << 14);

// In-place raw -> SNU amplitude scaling (variance scales by 1/normalization).
void to_snu(std::span<std::complex<double>> raw, const CalibrationRecord& cal);
void from_snu(std::span<std::complex<double>> snu_samples, const CalibrationRecord& cal);
double to_snu_scale(const CalibrationRecord& cal);

double db_to_transmittance(double loss_db);
double transmittance_to_db(double eta);

// Receiver-referred excess noise -> channel-output convention.
double backpropagate_excess_noise(double xi_at_receiver, double tau);

// Structured text (JSON) serialization, schema "cvqkd-calibration/1".
std::string serialize(const CalibrationRecord& cal);
CalibrationRecord deserialize(const std::string& text);

}  // namespace snu
}  // namespace cvqkd

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cvqkd/fft.hpp"

namespace cvqkd::spectral {

// Welch-averaged periodogram, Hann window, 50% overlap. Normalized so that
// complex white noise of total variance s gives a flat spectrum at s/nfft
// per bin (sum over bins equals the variance).
std::vector<double> welch_psd(std::span<const std::complex<double>> x, std::size_t nfft);

// Accumulating variant for multi-frame averages.
class WelchAccumulator {
  public:
    explicit WelchAccumulator(std::size_t nfft) : nfft_(nfft), acc_(nfft, 0.0) {}
    void add_frame(std::span<const std::complex<double>> x);
    std::vector<double> average() const;
    std::size_t segments() const { return nseg_; }

  private:
    std::size_t nfft_;
    std::size_t nseg_ = 0;
    std::vector<double> acc_;
};

// Centered moving average over the circular bin axis.
std::vector<double> smooth_circular(std::span<const double> psd, std::size_t half_width);

// Interpolate a PSD given on an nfft-bin circular grid onto an n-bin circular
// grid with the same sample rate (linear in normalized frequency).
std::vector<double> resample_psd(std::span<const double> psd, std::size_t n);

// Signed frequency of FFT bin k for an n-point transform at rate fs.
inline double bin_freq(std::size_t k, std::size_t n, double fs) {
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    return (kk <= nn / 2.0) ? kk * fs / nn : (kk - nn) * fs / nn;
}

// FFT bin index (rounded) for a signed frequency, n-point transform at fs.
inline std::size_t freq_bin(double f, std::size_t n, double fs) {
    double cyc = f / fs;
    cyc -= std::floor(cyc);
    std::size_t k = static_cast<std::size_t>(cyc * static_cast<double>(n) + 0.5);
    return k % n;
}

}  // namespace cvqkd::spectral

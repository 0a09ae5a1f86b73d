#include "cvqkd/spectral.hpp"

#include <cmath>

namespace cvqkd::spectral {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;

std::vector<double> hann(std::size_t n) {
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(n)));
    return w;
}
}  // namespace

void WelchAccumulator::add_frame(std::span<const std::complex<double>> x) {
    if (x.size() < nfft_) return;
    static thread_local std::vector<double> win;
    static thread_local double win_pow = 0.0;
    if (win.size() != nfft_) {
        win = hann(nfft_);
        win_pow = 0.0;
        for (double w : win) win_pow += w * w;
    }
    const std::size_t hop = nfft_ / 2;
    cbuf seg(nfft_);
    for (std::size_t start = 0; start + nfft_ <= x.size(); start += hop) {
        for (std::size_t i = 0; i < nfft_; ++i) seg[i] = win[i] * x[start + i];
        fft::forward(seg);
        const double norm = 1.0 / (static_cast<double>(nfft_) * win_pow);
        for (std::size_t k = 0; k < nfft_; ++k) acc_[k] += std::norm(seg[k]) * norm;
        ++nseg_;
    }
}

std::vector<double> WelchAccumulator::average() const {
    std::vector<double> out(acc_);
    if (nseg_ > 0)
        for (auto& v : out) v /= static_cast<double>(nseg_);
    return out;
}

std::vector<double> welch_psd(std::span<const std::complex<double>> x, std::size_t nfft) {
    WelchAccumulator acc(nfft);
    acc.add_frame(x);
    return acc.average();
}

std::vector<double> smooth_circular(std::span<const double> psd, std::size_t half_width) {
    const std::size_t n = psd.size();
    std::vector<double> out(n, 0.0);
    const std::size_t w = 2 * half_width + 1;
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < w; ++j) {
            const std::size_t idx = (k + n + j - half_width) % n;
            s += psd[idx];
        }
        out[k] = s / static_cast<double>(w);
    }
    return out;
}

std::vector<double> resample_psd(std::span<const double> psd, std::size_t n) {
    const std::size_t m = psd.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double pos = static_cast<double>(k) * static_cast<double>(m) /
                           static_cast<double>(n);
        const std::size_t j0 = static_cast<std::size_t>(pos) % m;
        const std::size_t j1 = (j0 + 1) % m;
        const double frac = pos - std::floor(pos);
        out[k] = psd[j0] + frac * (psd[j1] - psd[j0]);
    }
    return out;
}

}  // namespace cvqkd::spectral

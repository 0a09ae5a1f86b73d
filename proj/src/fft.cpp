#include "cvqkd/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace cvqkd::fft {

namespace {

// FFTW planning is not thread-safe; execution via fftw_execute_dft is.
// Plans are created on aligned scratch and reused for any 64-byte aligned
// buffer of the same size (new-array execute).
class PlanCache {
  public:
    static PlanCache& instance() {
        static PlanCache c;
        return c;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mu_);
        const auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        fftw_complex* scratch = fftw_alloc_complex(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), scratch, scratch, sign,
                                       FFTW_ESTIMATE);
        fftw_free(scratch);
        plans_.emplace(key, p);
        return p;
    }

  private:
    PlanCache() = default;
    std::mutex mu_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

void execute(std::complex<double>* in, std::complex<double>* out, std::size_t n, int sign) {
    fftw_plan p = PlanCache::instance().get(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

void normalize(std::complex<double>* x, std::size_t n) {
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) x[i] *= s;
}

}  // namespace

void forward(cbuf& x) {
    execute(x.data(), x.data(), x.size(), FFTW_FORWARD);
}

void inverse(cbuf& x) {
    execute(x.data(), x.data(), x.size(), FFTW_BACKWARD);
    normalize(x.data(), x.size());
}

void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    cbuf tmp(in, in + n);
    execute(tmp.data(), tmp.data(), n, FFTW_FORWARD);
    std::copy(tmp.begin(), tmp.end(), out);
}

void inverse(const std::complex<double>* in, std::complex<double>* out, std::size_t n) {
    cbuf tmp(in, in + n);
    execute(tmp.data(), tmp.data(), n, FFTW_BACKWARD);
    normalize(tmp.data(), n);
    std::copy(tmp.begin(), tmp.end(), out);
}

}  // namespace cvqkd::fft

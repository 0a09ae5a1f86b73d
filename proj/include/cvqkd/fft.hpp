#pragma once

#include <complex>
#include <cstdlib>
#include <limits>
#include <new>
#include <vector>

namespace cvqkd {

// 64-byte aligned allocator so every buffer sees the same FFTW SIMD path;
// plans are created once per size and reused on any buffer of that size.
template <typename T>
struct AlignedAlloc {
    using value_type = T;
    AlignedAlloc() = default;
    template <typename U>
    AlignedAlloc(const AlignedAlloc<U>&) {}

    T* allocate(std::size_t n) {
        if (n > std::numeric_limits<std::size_t>::max() / sizeof(T)) throw std::bad_alloc();
        void* p = std::aligned_alloc(64, ((n * sizeof(T) + 63) / 64) * 64);
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { std::free(p); }

    template <typename U>
    bool operator==(const AlignedAlloc<U>&) const {
        return true;
    }
};

using cbuf = std::vector<std::complex<double>, AlignedAlloc<std::complex<double>>>;

namespace fft {

// In-place transforms; inverse is normalized by 1/N.
void forward(cbuf& x);
void inverse(cbuf& x);

// Out-of-place copies for small work (pilot band extraction).
void forward(const std::complex<double>* in, std::complex<double>* out, std::size_t n);
void inverse(const std::complex<double>* in, std::complex<double>* out, std::size_t n);

}  // namespace fft
}  // namespace cvqkd

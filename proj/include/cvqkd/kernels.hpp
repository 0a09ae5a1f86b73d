#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/rng.hpp"

namespace cvqkd {

using cplx = std::complex<double>;

namespace kernels {

// Fixed decomposition unit for all parallel kernels. Work is always split on
// this grid (never on the thread count), and reduction partials are combined
// serially in chunk order, so results are bit-identical for any --threads.
inline constexpr std::size_t kChunk = std::size_t{1} << 16;

inline std::size_t num_chunks(std::size_t n) {
    return (n + kChunk - 1) / kChunk;
}

// Pairwise second-order sums of a tx/rx symbol stream. Sums are held raw so
// records merge associatively (sufficient statistics, not averages).
struct PairMoments {
    std::uint64_t n = 0;
    double sum_aa = 0.0;   // sum |a|^2
    double sum_bb = 0.0;   // sum |b|^2
    double sum_ab_re = 0.0;  // sum Re(conj(a) b)
    cplx sum_a{0.0, 0.0};
    cplx sum_b{0.0, 0.0};

    PairMoments& operator+=(const PairMoments& o) {
        n += o.n;
        sum_aa += o.sum_aa;
        sum_bb += o.sum_bb;
        sum_ab_re += o.sum_ab_re;
        sum_a += o.sum_a;
        sum_b += o.sum_b;
        return *this;
    }
};

struct SingleMoments {
    std::uint64_t n = 0;
    double sum_re2 = 0.0;
    double sum_im2 = 0.0;
    cplx sum{0.0, 0.0};

    SingleMoments& operator+=(const SingleMoments& o) {
        n += o.n;
        sum_re2 += o.sum_re2;
        sum_im2 += o.sum_im2;
        sum += o.sum;
        return *this;
    }
    // mean per-quadrature variance, mean removed
    double quad_variance() const;
};

// Plain serial loops, kept as the reference the parallel kernels are tested
// and benchmarked against.
namespace ref {

void scale(std::span<cplx> buf, double factor);
void rotate_tone(std::span<cplx> buf, double cycles_per_sample, double phase0_cycles);
void apply_phase(std::span<cplx> buf, std::span<const double> theta, double sign);
void apply_phase_interp(std::span<cplx> buf, std::span<const double> theta_dec,
                        std::size_t factor, double sign);
void gaussian_fill(std::span<cplx> out, double sigma_per_quad,
                   std::uint64_t frame_seed, rng::Stream stream);
void add_gaussian(std::span<cplx> buf, double sigma_per_quad,
                  std::uint64_t frame_seed, rng::Stream stream);
void wiener_phase(std::span<double> theta, double increment_var,
                  std::uint64_t frame_seed, rng::Stream stream);
void fir_upsample(std::span<const cplx> symbols, std::span<const double> taps,
                  std::size_t sps, std::span<cplx> out);
PairMoments pair_moments(std::span<const cplx> a, std::span<const cplx> b);
SingleMoments single_moments(std::span<const cplx> x);

}  // namespace ref

// Chunk-parallel versions (OpenMP when enabled). Elementwise kernels and the
// chunk-seeded noise fills match ref:: bit for bit; chunk-partial reductions
// match ref:: to rounding (ref accumulates in one running sum).
void scale(std::span<cplx> buf, double factor);
void rotate_tone(std::span<cplx> buf, double cycles_per_sample, double phase0_cycles);
void apply_phase(std::span<cplx> buf, std::span<const double> theta, double sign);
void apply_phase_interp(std::span<cplx> buf, std::span<const double> theta_dec,
                        std::size_t factor, double sign);
void gaussian_fill(std::span<cplx> out, double sigma_per_quad,
                   std::uint64_t frame_seed, rng::Stream stream);
void add_gaussian(std::span<cplx> buf, double sigma_per_quad,
                  std::uint64_t frame_seed, rng::Stream stream);
void wiener_phase(std::span<double> theta, double increment_var,
                  std::uint64_t frame_seed, rng::Stream stream);
void fir_upsample(std::span<const cplx> symbols, std::span<const double> taps,
                  std::size_t sps, std::span<cplx> out);
PairMoments pair_moments(std::span<const cplx> a, std::span<const cplx> b);
SingleMoments single_moments(std::span<const cplx> x);

void downsample(std::span<const cplx> in, std::size_t offset, std::size_t step,
                std::span<cplx> out);

}  // namespace kernels
}  // namespace cvqkd

#include "cvqkd/kernels.hpp"

#include <cassert>
#include <cmath>

namespace cvqkd::kernels {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline cplx expi(double radians) {
    return {std::cos(radians), std::sin(radians)};
}

// e^{i 2 pi (m k + p0)} with the argument reduced in cycles before the trig
// call; |m| <= 0.5 but m*k can reach 1e6 cycles in a frame.
inline cplx tone(double cycles_per_sample, double phase0_cycles, std::uint64_t k) {
    double cyc = cycles_per_sample * static_cast<double>(k) + phase0_cycles;
    cyc -= std::floor(cyc);
    return expi(kTwoPi * cyc);
}

// One chunk of a chunk-seeded Gaussian stream. Content depends only on
// (frame_seed, stream, chunk index) -- never on scheduling.
inline void gaussian_chunk(std::span<cplx> out, std::size_t chunk_idx, double sigma,
                           std::uint64_t frame_seed, rng::Stream stream, bool add) {
    rng::Gaussian g(rng::chunk_seed(frame_seed, stream, chunk_idx));
    if (add) {
        for (auto& v : out) v += g.next_complex(sigma);
    } else {
        for (auto& v : out) v = g.next_complex(sigma);
    }
}

inline void wiener_increments_chunk(std::span<double> out, std::size_t chunk_idx,
                                    double sigma, std::uint64_t frame_seed,
                                    rng::Stream stream) {
    rng::Gaussian g(rng::chunk_seed(frame_seed, stream, chunk_idx));
    for (auto& v : out) v = sigma * g.next();
}

// out[k] = sum_i taps[k - sps*i] * symbols[i] for k in [k_lo, k_hi)
inline void fir_gather_range(std::span<const cplx> symbols, std::span<const double> taps,
                             std::size_t sps, std::span<cplx> out, std::size_t k_lo,
                             std::size_t k_hi) {
    const std::ptrdiff_t nt = static_cast<std::ptrdiff_t>(taps.size());
    const std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(symbols.size());
    const std::ptrdiff_t step = static_cast<std::ptrdiff_t>(sps);
    for (std::size_t k = k_lo; k < k_hi; ++k) {
        const std::ptrdiff_t kk = static_cast<std::ptrdiff_t>(k);
        const std::ptrdiff_t lo_num = kk - nt + 1;
        std::ptrdiff_t i = (lo_num <= 0) ? 0 : (lo_num + step - 1) / step;
        std::ptrdiff_t i_hi = kk / step;
        if (i_hi >= ns) i_hi = ns - 1;
        cplx acc{0.0, 0.0};
        for (; i <= i_hi; ++i)
            acc += taps[static_cast<std::size_t>(kk - step * i)] *
                   symbols[static_cast<std::size_t>(i)];
        out[k] = acc;
    }
}

inline PairMoments pair_moments_range(std::span<const cplx> a, std::span<const cplx> b) {
    PairMoments m;
    m.n = a.size();
    for (std::size_t i = 0; i < a.size(); ++i) {
        m.sum_aa += std::norm(a[i]);
        m.sum_bb += std::norm(b[i]);
        m.sum_ab_re += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        m.sum_a += a[i];
        m.sum_b += b[i];
    }
    return m;
}

inline SingleMoments single_moments_range(std::span<const cplx> x) {
    SingleMoments m;
    m.n = x.size();
    for (const auto& v : x) {
        m.sum_re2 += v.real() * v.real();
        m.sum_im2 += v.imag() * v.imag();
        m.sum += v;
    }
    return m;
}

}  // namespace

double SingleMoments::quad_variance() const {
    if (n == 0) return 0.0;
    const double nn = static_cast<double>(n);
    const double mr = sum.real() / nn;
    const double mi = sum.imag() / nn;
    const double vr = sum_re2 / nn - mr * mr;
    const double vi = sum_im2 / nn - mi * mi;
    return 0.5 * (vr + vi);
}

// ---------------------------------------------------------------------------
// reference implementations

namespace ref {

void scale(std::span<cplx> buf, double factor) {
    for (auto& v : buf) v *= factor;
}

void rotate_tone(std::span<cplx> buf, double cycles_per_sample, double phase0_cycles) {
    for (std::size_t k = 0; k < buf.size(); ++k)
        buf[k] *= tone(cycles_per_sample, phase0_cycles, k);
}

void apply_phase(std::span<cplx> buf, std::span<const double> theta, double sign) {
    assert(buf.size() == theta.size());
    for (std::size_t k = 0; k < buf.size(); ++k) buf[k] *= expi(sign * theta[k]);
}

void apply_phase_interp(std::span<cplx> buf, std::span<const double> theta_dec,
                        std::size_t factor, double sign) {
    for (std::size_t k = 0; k < buf.size(); ++k) {
        const std::size_t j = k / factor;
        const std::size_t j1 = (j + 1 < theta_dec.size()) ? j + 1 : j;
        const double frac = static_cast<double>(k - j * factor) / static_cast<double>(factor);
        const double th = theta_dec[j] + frac * (theta_dec[j1] - theta_dec[j]);
        buf[k] *= expi(sign * th);
    }
}

void gaussian_fill(std::span<cplx> out, double sigma, std::uint64_t frame_seed,
                   rng::Stream stream) {
    for (std::size_t c = 0; c < num_chunks(out.size()); ++c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, out.size());
        gaussian_chunk(out.subspan(lo, hi - lo), c, sigma, frame_seed, stream, false);
    }
}

void add_gaussian(std::span<cplx> buf, double sigma, std::uint64_t frame_seed,
                  rng::Stream stream) {
    for (std::size_t c = 0; c < num_chunks(buf.size()); ++c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, buf.size());
        gaussian_chunk(buf.subspan(lo, hi - lo), c, sigma, frame_seed, stream, true);
    }
}

void wiener_phase(std::span<double> theta, double increment_var,
                  std::uint64_t frame_seed, rng::Stream stream) {
    const double sigma = std::sqrt(increment_var);
    double acc = 0.0;
    for (std::size_t c = 0; c < num_chunks(theta.size()); ++c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(lo + kChunk, theta.size());
        rng::Gaussian g(rng::chunk_seed(frame_seed, stream, c));
        for (std::size_t k = lo; k < hi; ++k) {
            theta[k] = acc;  // theta[0] = 0; increment applied after emission
            acc += sigma * g.next();
        }
    }
}

void fir_upsample(std::span<const cplx> symbols, std::span<const double> taps,
                  std::size_t sps, std::span<cplx> out) {
    fir_gather_range(symbols, taps, sps, out, 0, out.size());
}

PairMoments pair_moments(std::span<const cplx> a, std::span<const cplx> b) {
    return pair_moments_range(a, b);
}

SingleMoments single_moments(std::span<const cplx> x) {
    return single_moments_range(x);
}

}  // namespace ref

// ---------------------------------------------------------------------------
// chunk-parallel implementations

void scale(std::span<cplx> buf, double factor) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(buf.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, buf.size());
        for (std::size_t k = lo; k < hi; ++k) buf[k] *= factor;
    }
}

void rotate_tone(std::span<cplx> buf, double cycles_per_sample, double phase0_cycles) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(buf.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, buf.size());
        for (std::size_t k = lo; k < hi; ++k)
            buf[k] *= tone(cycles_per_sample, phase0_cycles, k);
    }
}

void apply_phase(std::span<cplx> buf, std::span<const double> theta, double sign) {
    assert(buf.size() == theta.size());
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(buf.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, buf.size());
        for (std::size_t k = lo; k < hi; ++k) buf[k] *= expi(sign * theta[k]);
    }
}

void apply_phase_interp(std::span<cplx> buf, std::span<const double> theta_dec,
                        std::size_t factor, double sign) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(buf.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, buf.size());
        for (std::size_t k = lo; k < hi; ++k) {
            const std::size_t j = k / factor;
            const std::size_t j1 = (j + 1 < theta_dec.size()) ? j + 1 : j;
            const double frac =
                static_cast<double>(k - j * factor) / static_cast<double>(factor);
            const double th = theta_dec[j] + frac * (theta_dec[j1] - theta_dec[j]);
            buf[k] *= expi(sign * th);
        }
    }
}

void gaussian_fill(std::span<cplx> out, double sigma, std::uint64_t frame_seed,
                   rng::Stream stream) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(out.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, out.size());
        gaussian_chunk(out.subspan(lo, hi - lo), static_cast<std::size_t>(c), sigma,
                       frame_seed, stream, false);
    }
}

void add_gaussian(std::span<cplx> buf, double sigma, std::uint64_t frame_seed,
                  rng::Stream stream) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(buf.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, buf.size());
        gaussian_chunk(buf.subspan(lo, hi - lo), static_cast<std::size_t>(c), sigma,
                       frame_seed, stream, true);
    }
}

void wiener_phase(std::span<double> theta, double increment_var,
                  std::uint64_t frame_seed, rng::Stream stream) {
    // two-pass chunked scan: per-chunk increments and sums in parallel,
    // serial offset pass over chunk sums, parallel in-chunk cumsum
    const std::size_t n = theta.size();
    const std::size_t nck = num_chunks(n);
    const double sigma = std::sqrt(increment_var);
    std::vector<double> chunk_sum(nck, 0.0);

    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(nck);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        wiener_increments_chunk(std::span<double>(theta.data() + lo, hi - lo),
                                static_cast<std::size_t>(c), sigma, frame_seed, stream);
        double s = 0.0;
        for (std::size_t k = lo; k < hi; ++k) s += theta[k];
        chunk_sum[static_cast<std::size_t>(c)] = s;
    }
    std::vector<double> offset(nck, 0.0);
    for (std::size_t c = 1; c < nck; ++c) offset[c] = offset[c - 1] + chunk_sum[c - 1];
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, n);
        double acc = offset[static_cast<std::size_t>(c)];
        for (std::size_t k = lo; k < hi; ++k) {
            const double w = theta[k];
            theta[k] = acc;  // exclusive scan: theta[0] = 0
            acc += w;
        }
    }
}

void fir_upsample(std::span<const cplx> symbols, std::span<const double> taps,
                  std::size_t sps, std::span<cplx> out) {
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(num_chunks(out.size()));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, out.size());
        fir_gather_range(symbols, taps, sps, out, lo, hi);
    }
}

PairMoments pair_moments(std::span<const cplx> a, std::span<const cplx> b) {
    assert(a.size() == b.size());
    const std::size_t nck = num_chunks(a.size());
    std::vector<PairMoments> partial(nck);
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(nck);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, a.size());
        partial[static_cast<std::size_t>(c)] =
            pair_moments_range(a.subspan(lo, hi - lo), b.subspan(lo, hi - lo));
    }
    PairMoments total;
    for (const auto& p : partial) total += p;  // fixed order
    return total;
}

SingleMoments single_moments(std::span<const cplx> x) {
    const std::size_t nck = num_chunks(x.size());
    std::vector<SingleMoments> partial(nck);
    const std::ptrdiff_t nc = static_cast<std::ptrdiff_t>(nck);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < nc; ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = std::min(lo + kChunk, x.size());
        partial[static_cast<std::size_t>(c)] = single_moments_range(x.subspan(lo, hi - lo));
    }
    SingleMoments total;
    for (const auto& p : partial) total += p;
    return total;
}

void downsample(std::span<const cplx> in, std::size_t offset, std::size_t step,
                std::span<cplx> out) {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::size_t src = offset + static_cast<std::size_t>(i) * step;
        out[static_cast<std::size_t>(i)] = (src < in.size()) ? in[src] : cplx{0.0, 0.0};
    }
}

}  // namespace cvqkd::kernels

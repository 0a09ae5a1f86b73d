#include <cmath>

#include "cvqkd/channel.hpp"
#include "cvqkd/kernels.hpp"
#include "cvqkd/snu.hpp"
#include "doctest.h"

using namespace cvqkd;

namespace {

std::vector<cplx> noise_frame(std::size_t n, double sigma_quad, std::uint64_t seed) {
    std::vector<cplx> v(n);
    kernels::gaussian_fill(std::span<cplx>(v), sigma_quad, seed, rng::Stream::misc);
    return v;
}

}  // namespace

TEST_CASE("calibration: normalization factor is the variance difference") {
    // vacuum var 2.0, electronic var 1.0 -> factor 1.0
    std::vector<std::vector<cplx>> vac = {noise_frame(1 << 18, std::sqrt(2.0), 1)};
    std::vector<std::vector<cplx>> el = {noise_frame(1 << 18, 1.0, 2)};
    const auto cal = snu::calibrate(vac, el, 1e9);
    CHECK(cal.normalization() == doctest::Approx(1.0).epsilon(0.02));
    CHECK(cal.vacuum_psd.size() == std::size_t{1} << 14);
}

TEST_CASE("calibration: V_el in SNU for a 50:1 vacuum/electronic ratio") {
    // shot variance 49 v, electronic v -> vacuum = 50 v; V_el = 1/49 within 1%
    const double v = 0.37;
    const std::size_t n = 10'000'000;
    std::vector<std::vector<cplx>> el = {noise_frame(n, std::sqrt(v), 3)};
    std::vector<std::vector<cplx>> vac = {noise_frame(n, std::sqrt(49.0 * v), 4)};
    for (std::size_t i = 0; i < n; ++i) vac[0][i] += el[0][i];
    const auto cal = snu::calibrate(vac, el, 1e9);
    CHECK(cal.v_el_snu() == doctest::Approx(1.0 / 49.0).epsilon(0.01));
}

TEST_CASE("calibration: degenerate inputs throw") {
    std::vector<std::vector<cplx>> vac = {noise_frame(1 << 16, 1.0, 5)};
    std::vector<std::vector<cplx>> el = {noise_frame(1 << 16, 2.0, 6)};
    CHECK_THROWS_AS(snu::calibrate(vac, el, 1e9), DegenerateCalibration);
    CHECK_THROWS_AS(snu::calibrate({}, el, 1e9), DegenerateCalibration);
}

TEST_CASE("to_snu: shot-only input normalizes to unit variance; linear; invertible") {
    const double shot_raw = 5.3;
    const double el_raw = 0.21;
    std::vector<std::vector<cplx>> el = {noise_frame(1 << 20, std::sqrt(el_raw), 7)};
    std::vector<std::vector<cplx>> vac = {noise_frame(1 << 20, std::sqrt(shot_raw), 8)};
    for (std::size_t i = 0; i < vac[0].size(); ++i) vac[0][i] += el[0][i];
    const auto cal = snu::calibrate(vac, el, 1e9);

    auto shot_only = noise_frame(1 << 20, std::sqrt(shot_raw), 9);
    snu::to_snu(std::span<cplx>(shot_only), cal);
    const auto m = kernels::single_moments(std::span<const cplx>(shot_only));
    CHECK(m.quad_variance() == doctest::Approx(1.0).epsilon(0.01));

    // zero in, zero out; scaling by c scales the output by c
    std::vector<cplx> z(16, cplx{0.0, 0.0});
    snu::to_snu(std::span<cplx>(z), cal);
    for (const auto& s : z) CHECK(std::abs(s) == 0.0);

    std::vector<cplx> x = {cplx{1.0, -2.0}};
    std::vector<cplx> x3 = {cplx{3.0, -6.0}};
    snu::to_snu(std::span<cplx>(x), cal);
    snu::to_snu(std::span<cplx>(x3), cal);
    CHECK(x3[0].real() == doctest::Approx(3.0 * x[0].real()).epsilon(1e-12));

    // round trip to machine precision
    std::vector<cplx> y = {cplx{0.7, 0.4}};
    const cplx y0 = y[0];
    snu::to_snu(std::span<cplx>(y), cal);
    snu::from_snu(std::span<cplx>(y), cal);
    CHECK(std::abs(y[0] - y0) < 1e-15);
}

TEST_CASE("dB to transmittance") {
    CHECK(snu::db_to_transmittance(0.0) == 1.0);
    CHECK(snu::db_to_transmittance(20.17) == doctest::Approx(0.0096).epsilon(2e-3));
    CHECK(snu::db_to_transmittance(17.0) == doctest::Approx(0.0199526).epsilon(1e-5));
    CHECK(snu::db_to_transmittance(3.0103) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_THROWS_AS(snu::db_to_transmittance(-1.0), NegativeLoss);
    // strictly decreasing
    double prev = 2.0;
    for (double db = 0.0; db <= 30.0; db += 0.5) {
        const double t = snu::db_to_transmittance(db);
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("excess-noise back-propagation") {
    CHECK(snu::backpropagate_excess_noise(0.489e-3, 0.685) ==
          doctest::Approx(0.714e-3).epsilon(2e-3));
    CHECK(snu::backpropagate_excess_noise(0.123, 1.0) == 0.123);
    CHECK_THROWS_AS(snu::backpropagate_excess_noise(0.1, 0.0), DomainError);
}

TEST_CASE("calibration record serialization round trip") {
    std::vector<std::vector<cplx>> vac = {noise_frame(1 << 16, 2.0, 11)};
    std::vector<std::vector<cplx>> el = {noise_frame(1 << 16, 1.0, 12)};
    const auto cal = snu::calibrate(vac, el, 1e9, 1 << 10);
    const auto text = snu::serialize(cal);
    const auto back = snu::deserialize(text);
    CHECK(back.vacuum_variance_raw == cal.vacuum_variance_raw);
    CHECK(back.electronic_variance_raw == cal.electronic_variance_raw);
    CHECK(back.vacuum_psd == cal.vacuum_psd);
    CHECK(back.fs_hz == cal.fs_hz);
    CHECK_THROWS_AS(snu::deserialize("{\"schema\":\"nope\"}"), ConfigError);
}

TEST_CASE("channel params validation names the field") {
    ChannelParams p;
    p.tau = 1.5;
    try {
        p.validate();
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("tau") != std::string::npos);
    }
}

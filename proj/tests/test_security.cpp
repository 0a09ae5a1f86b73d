#include <cmath>

#include "cvqkd/estimation.hpp"
#include "cvqkd/rng.hpp"
#include "cvqkd/security.hpp"
#include "doctest.h"

using namespace cvqkd;
using namespace cvqkd::security;

namespace {

ChannelParams ref_point(int row) {
    ChannelParams p;
    p.tau = 0.685;
    switch (row) {
        case 0:  // 100 km OFF
            p.v_mod = 9.41; p.eta = 0.0180; p.xi = 0.714e-3; p.v_el = 19.62e-3; break;
        case 1:  // 100 km ON
            p.v_mod = 9.41; p.eta = 0.0184; p.xi = 0.760e-3; p.v_el = 19.25e-3; break;
        case 2:  // 100 km ON, N = 1.6e9
            p.v_mod = 9.41; p.eta = 0.0183; p.xi = 0.712e-3; p.v_el = 19.26e-3; break;
        default:  // 120 km ON
            p.v_mod = 4.71; p.eta = 0.0096; p.xi = 0.444e-3; p.v_el = 18.99e-3; break;
    }
    return p;
}

}  // namespace

TEST_CASE("bosonic entropy g") {
    CHECK(g_entropy(1.0) == 0.0);
    CHECK(g_entropy(3.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g_entropy(1.0 + 1e-12) >= 0.0);
    CHECK(g_entropy(1.0 + 1e-12) < 1e-9);
    CHECK_THROWS_AS(g_entropy(1.0 - 1e-6), DomainError);
}

TEST_CASE("z quantile for the Gaussian confidence intervals") {
    CHECK(estimation::z_quantile(1e-10) == doctest::Approx(6.466951).epsilon(2e-4));
    CHECK(estimation::z_quantile(0.05) == doctest::Approx(1.959964).epsilon(1e-6));
    CHECK(estimation::z_quantile(0.01) == doctest::Approx(2.575829).epsilon(1e-6));
}

TEST_CASE("finite-size correction term") {
    // dominant term at n = 1e9, eps = 1e-10
    const double dom = 7.0 * std::sqrt(std::log2(2e10) / 1e9);
    CHECK(dom == doctest::Approx(1.2949e-3).epsilon(1e-4));
    CHECK(delta_n(1e9) == doctest::Approx(1.294958e-3).epsilon(1e-5));
    CHECK(delta_n(1e9) > dom);
    // scaling of the dominant term
    CHECK(delta_n(4e9) == doctest::Approx(delta_n(1e9) / 2.0).epsilon(1e-3));
    CHECK(delta_n(1e18) < 1e-7);
}

TEST_CASE("mutual information") {
    ChannelParams p = ref_point(1);
    SUBCASE("V_M -> 0 gives zero") {
        p.v_mod = 1e-300;
        CHECK(mutual_information(p) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("frozen values") {
        CHECK(mutual_information(ref_point(0)) == doctest::Approx(0.080569210186).epsilon(1e-9));
        CHECK(mutual_information(ref_point(1)) == doctest::Approx(0.082322918383).epsilon(1e-9));
        CHECK(mutual_information(ref_point(3)) == doctest::Approx(0.021960794287).epsilon(1e-9));
    }
    SUBCASE("monotone in V_M and eta") {
        double prev = 0.0;
        for (double vm : {1.0, 2.0, 4.0, 8.0, 16.0}) {
            ChannelParams q = ref_point(1);
            q.v_mod = vm;
            const double i = mutual_information(q);
            CHECK(i > prev);
            prev = i;
        }
        prev = 0.0;
        for (double eta : {0.001, 0.01, 0.1, 0.5, 1.0}) {
            ChannelParams q = ref_point(1);
            q.eta = eta;
            const double i = mutual_information(q);
            CHECK(i > prev);
            prev = i;
        }
    }
    SUBCASE("empirical correlation oracle at the 100 km ON row") {
        // Monte Carlo of the fixed Gaussian model: per-quadrature signal
        // tau eta V_M / 2, noise 1 + (V_el + tau xi)/2; both quadratures give
        // I = -log2(1 - rho^2).
        const ChannelParams q = ref_point(1);
        const std::size_t n = 10'000'000;
        rng::Gaussian g(12345);
        const double sig = std::sqrt(q.tau * q.eta * q.v_mod / 2.0);
        const double noise = std::sqrt(1.0 + (q.v_el + q.tau * q.xi) / 2.0);
        double saa = 0, sbb = 0, sab = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = g.next() * std::sqrt(q.v_mod);
            const double b = sig / std::sqrt(q.v_mod) * a + noise * g.next();
            saa += a * a;
            sbb += b * b;
            sab += a * b;
        }
        const double rho2 = (sab * sab) / (saa * sbb);
        const double i_emp = -std::log2(1.0 - rho2);
        CHECK(i_emp == doctest::Approx(mutual_information(q)).epsilon(0.01));
    }
}

TEST_CASE("Holevo bound: frozen reference-point values, closed form vs numerical") {
    CHECK(holevo_bound(ref_point(0)) == doctest::Approx(0.075727526622).epsilon(1e-9));
    CHECK(holevo_bound(ref_point(1)) == doctest::Approx(0.077474091932).epsilon(1e-9));
    CHECK(holevo_bound(ref_point(2)) == doctest::Approx(0.076907712446).epsilon(1e-9));
    CHECK(holevo_bound(ref_point(3)) == doctest::Approx(0.020196862720).epsilon(1e-9));
    for (int row = 0; row < 4; ++row) {
        const double cf = holevo_bound(ref_point(row));
        const double nm = holevo_bound_numeric(ref_point(row));
        CHECK(std::abs(cf - nm) < 1e-9);
    }
}

TEST_CASE("Holevo bound: pure lossless channel gives zero") {
    ChannelParams p;
    p.v_mod = 5.0;
    p.eta = 1.0;
    p.xi = 0.0;
    p.tau = 1.0;
    p.v_el = 0.0;
    CHECK(holevo_bound(p) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("Holevo bound: closed form equals numerical spectrum on random draws") {
    rng::Xoshiro256 r(2024);
    int checked = 0;
    double worst = 0.0;
    while (checked < 1000) {
        ChannelParams p;
        p.v_mod = 0.5 + 30.0 * r.uniform();
        p.eta = 0.001 + 0.999 * r.uniform();
        p.xi = 0.05 * r.uniform();
        p.tau = 0.2 + 0.79 * r.uniform();
        p.v_el = 0.2 * r.uniform();
        const double cf = holevo_bound(p);
        const double nm = holevo_bound_numeric(p);
        worst = std::max(worst, std::abs(cf - nm));
        ++checked;
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("Holevo bound: monotone in xi; trusted-degenerate limit") {
    double prev = -1.0;
    for (double xi : {0.0, 0.5e-3, 1e-3, 2e-3, 5e-3, 1e-2}) {
        ChannelParams p = ref_point(3);
        p.xi = xi;
        const double c = holevo_bound(p);
        CHECK(c > prev);
        prev = c;
    }
    // tau -> 1, V_el -> 0 reduces to the untrusted two-mode expression
    ChannelParams p;
    p.v_mod = 5.0;
    p.eta = 0.5;
    p.xi = 1e-3;
    p.tau = 1.0;
    p.v_el = 0.0;
    CHECK(holevo_bound(p) == doctest::Approx(0.776002694081).epsilon(1e-9));
    CHECK(holevo_bound_numeric(p) == doctest::Approx(0.776002694081).epsilon(1e-9));
}

TEST_CASE("key rate: 120 km actual-key scenario") {
    EpsilonBudget eps;
    const auto r = key_rate(ref_point(3), 0.9373, 0.30, 1e8, eps, RateMode::asymptotic);
    CHECK(r.rate_asymptotic == doctest::Approx(3.869898e-4).epsilon(1e-4));
    // the reference reports the gross bits/use x symbol-rate product
    CHECK(r.skr_gross_bps == doctest::Approx(48373.0).epsilon(2e-3));
    // net throughput bookkeeping is exact
    CHECK(r.skr_bps == r.rate_asymptotic * 1.25e8 * (1.0 - 0.30));
}

TEST_CASE("key rate: xi -> large clamps to zero") {
    ChannelParams p = ref_point(1);
    p.xi = 1.0;
    EpsilonBudget eps;
    const auto r = key_rate(p, 0.974, 0.0, 1e9, eps, RateMode::finite);
    CHECK(r.rate_finite == 0.0);
    CHECK(r.rate_clamped_zero);
}

TEST_CASE("key rate: finite <= asymptotic, monotone in beta, xi, n") {
    EpsilonBudget eps;
    const ChannelParams p = ref_point(2);
    const auto rf = key_rate(p, 0.974, 0.0, 1.6e9, eps, RateMode::finite);
    const auto ra = key_rate(p, 0.974, 0.0, 1.6e9, eps, RateMode::asymptotic);
    CHECK(rf.rate_finite <= ra.rate_asymptotic);

    double prev = -1.0;
    for (double beta : {0.90, 0.93, 0.96, 0.99}) {
        const double r = key_rate(p, beta, 0.0, 1.6e9, eps, RateMode::finite).rate_finite;
        CHECK(r >= prev);
        prev = r;
    }
    prev = 1e9;
    for (double xi : {0.2e-3, 0.5e-3, 0.8e-3, 1.2e-3}) {
        ChannelParams q = p;
        q.xi = xi;
        const double r = key_rate(q, 0.974, 0.0, 1.6e9, eps, RateMode::finite).rate_finite;
        CHECK(r <= prev);
        prev = r;
    }
    prev = -1.0;
    for (double n : {2e8, 5e8, 1e9, 4e9, 1.6e10}) {
        const double r = key_rate(p, 0.974, 0.0, n, eps, RateMode::finite).rate_finite;
        CHECK(r >= prev);
        prev = r;
    }
}

TEST_CASE("loss sweep: 120 km noise, beta 96%, cutoff beyond 21 dB") {
    std::vector<double> grid;
    for (double l = 15.0; l <= 25.0; l += 0.1) grid.push_back(l);
    EpsilonBudget eps;
    const auto sweep =
        rate_vs_loss_sweep(ref_point(3), grid, 0.96, 0.0, RateMode::asymptotic, 1e8, eps);
    const double cutoff = cutoff_loss_db(sweep, RateMode::asymptotic);
    CHECK(cutoff > 21.0);
    CHECK(cutoff < 23.0);
    // beta = 0 kills the rate everywhere
    const auto dead = rate_vs_loss_sweep(ref_point(3), {15.0, 20.0}, 0.0, 0.0,
                                         RateMode::asymptotic, 1e8, eps);
    for (const auto& pt : dead) CHECK(pt.rate_asymptotic == 0.0);
    // cutoff decreases when xi grows
    ChannelParams noisy = ref_point(3);
    noisy.xi = 2.0e-3;
    const auto sweep2 =
        rate_vs_loss_sweep(noisy, grid, 0.96, 0.0, RateMode::asymptotic, 1e8, eps);
    CHECK(cutoff_loss_db(sweep2, RateMode::asymptotic) < cutoff);
}

TEST_CASE("blocksize/beta grid: block-size anchors at the 120 km operating point") {
    std::vector<double> n_grid;
    for (int k = 1; k <= 30; ++k) n_grid.push_back(1e9 * k);
    EpsilonBudget eps;
    const auto grid = blocksize_beta_grid(ref_point(3), n_grid, {0.97, 1.0}, eps, 0.30);
    REQUIRE(grid.min_n_per_beta.size() == 2);
    const double min_beta_1 = grid.min_n_per_beta[1];
    const double min_beta_097 = grid.min_n_per_beta[0];
    CHECK(std::abs(min_beta_1 - 5e9) <= 1e9);  // within one grid step of 5e9
    CHECK(min_beta_097 > 12e9);
    // feasibility is monotone in (N, beta)
    for (const auto& pt : grid.points) {
        if (pt.rate > 0.0) {
            for (const auto& qt : grid.points)
                if (qt.beta >= pt.beta && qt.n_blocksize >= pt.n_blocksize)
                    CHECK(qt.rate > 0.0);
        }
    }
}

TEST_CASE("modulation variance optimizer") {
    EpsilonBudget eps;
    SUBCASE("reference noise floor: optimum within factor 1.5 of the deployed choice") {
        const double slope = (0.444e-3 - 0.4e-3) / 4.71;
        const auto opt = optimize_modulation_variance(
            snu::db_to_transmittance(20.17), 0.4e-3, slope, 0.685, 18.99e-3, 0.96, 0.0,
            RateMode::asymptotic, 1e8, eps);
        CHECK(opt.v_mod > 4.71 / 1.5);
        CHECK(opt.v_mod < 4.71 * 1.5);
        CHECK(opt.rate > 0.0);
    }
    SUBCASE("zero slope reduces to the plain optimum and matches a grid scan") {
        const auto opt = optimize_modulation_variance(
            snu::db_to_transmittance(20.17), 0.444e-3, 0.0, 0.685, 18.99e-3, 0.96, 0.0,
            RateMode::asymptotic, 1e8, eps);
        double best_r = -1.0, best_v = 0.0;
        for (double v = 0.5; v <= 20.0; v += 0.01) {
            ChannelParams p = ref_point(3);
            p.eta = snu::db_to_transmittance(20.17);
            p.v_mod = v;
            const double r =
                key_rate(p, 0.96, 0.0, 1e8, eps, RateMode::asymptotic).rate_asymptotic;
            if (r > best_r) {
                best_r = r;
                best_v = v;
            }
        }
        CHECK(opt.v_mod == doctest::Approx(best_v).epsilon(0.01));
        CHECK(opt.rate == doctest::Approx(best_r).epsilon(1e-6));
    }
    SUBCASE("optimum decreases as the phase-noise slope grows") {
        const auto a = optimize_modulation_variance(0.0096, 0.3e-3, 1e-5, 0.685, 19e-3,
                                                    0.96, 0.0, RateMode::asymptotic, 1e8,
                                                    eps);
        const auto b = optimize_modulation_variance(0.0096, 0.3e-3, 8e-5, 0.685, 19e-3,
                                                    0.96, 0.0, RateMode::asymptotic, 1e8,
                                                    eps);
        CHECK(b.v_mod < a.v_mod);
    }
    SUBCASE("hopeless channel throws NoPositiveRate") {
        CHECK_THROWS_AS(optimize_modulation_variance(1e-4, 0.05, 0.0, 0.685, 19e-3, 0.9,
                                                     0.0, RateMode::asymptotic, 1e8, eps),
                        NoPositiveRate);
    }
}

TEST_CASE("epsilon budget composition is validated") {
    EpsilonBudget eps;
    CHECK_NOTHROW(eps.validate());
    eps.eps_total = 1e-11;  // smaller than the component sum
    CHECK_THROWS_AS(eps.validate(), ConfigError);
}

TEST_CASE("finite-size worst case brackets the point estimates") {
    const ChannelParams p = ref_point(2);
    double eta_wc = 0.0, xi_wc = 0.0;
    estimation::worst_case_from_true(p, 1.6e9, 1e-10, PeConvention{}, eta_wc, xi_wc);
    CHECK(eta_wc < p.eta);
    CHECK(eta_wc > 0.9 * p.eta);
    CHECK(xi_wc > p.xi);
    // shrink as 1/sqrt(n): a 100x bigger block gives ~10x smaller interval
    double eta_wc2 = 0.0, xi_wc2 = 0.0;
    estimation::worst_case_from_true(p, 1.6e11, 1e-10, PeConvention{}, eta_wc2, xi_wc2);
    CHECK((xi_wc2 - p.xi) == doctest::Approx((xi_wc - p.xi) / 10.0).epsilon(0.01));
}

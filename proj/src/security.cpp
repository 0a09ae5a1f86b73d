#include "cvqkd/security.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cvqkd {

void EpsilonBudget::validate() const {
    for (double e : {eps_pe, eps_pa, eps_bar, eps_total})
        if (!(e > 0.0 && e < 1.0)) throw ConfigError("EpsilonBudget: probabilities in (0, 1)");
    if (eps_total + 1e-18 < eps_pe + eps_pa + eps_bar)
        throw ConfigError("EpsilonBudget: eps_total must cover the component sum");
}

namespace security {

namespace {

double log2_halfx(double h) {
    // h * log2(h) with the h -> 0 limit
    return h > 0.0 ? h * std::log2(h) : 0.0;
}

struct TwoModeCM {
    double a, b, c;  // [[a I, c sz], [c sz, b I]]
};

double two_mode_entropy(const TwoModeCM& m) {
    // long double: delta^2 - 4 d^2 cancels badly when nu2 approaches 1
    const long double a = m.a, b = m.b, c = m.c;
    const long double delta = a * a + b * b - 2.0L * c * c;
    const long double d = a * b - c * c;
    const long double rad =
        std::sqrt(std::max<long double>(delta * delta - 4.0L * d * d, 0.0L));
    const double nu1 =
        static_cast<double>(std::sqrt(std::max<long double>((delta + rad) / 2.0L, 1.0L)));
    const double nu2 =
        static_cast<double>(std::sqrt(std::max<long double>((delta - rad) / 2.0L, 0.0L)));
    return g_entropy(nu1) + g_entropy(std::max(nu2, 1.0));
}

struct TrustedModel {
    double a, b, c;   // A-B1 state after the channel
    double w, wc;     // detector EPR variance and correlation
    double b2;        // Bob's mode at the detector output
    double ct, st;    // sqrt(tau), sqrt(1-tau)
};

TrustedModel build_model(const ChannelParams& p) {
    p.validate();
    const double V = p.v_mod + 1.0;
    TrustedModel m;
    m.a = V;
    m.b = p.eta * (V - 1.0) + 1.0 + p.xi;
    m.c = std::sqrt(p.eta * (V * V - 1.0));
    const double omt = 1.0 - p.tau;
    if (omt < 1e-9) {
        if (p.v_el > 1e-12)
            throw NumericalInstability(
                "holevo_bound: trusted electronic noise requires tau < 1");
        m.w = 1.0;
    } else {
        m.w = 1.0 + p.v_el / omt;
    }
    m.wc = std::sqrt(std::max(m.w * m.w - 1.0, 0.0));
    m.ct = std::sqrt(p.tau);
    m.st = std::sqrt(std::max(omt, 0.0));
    m.b2 = p.tau * m.b + (1.0 - p.tau) * m.w;
    return m;
}

// --- small fixed-size helpers for the closed-form conditional spectrum ----
// evaluated in long double: g'(x) grows like -log(x-1) near 1, so the
// symplectic invariants need headroom beyond double for the 1e-9 agreement
// with the numerical route

using real_t = long double;
using Mat6 = std::array<std::array<real_t, 6>, 6>;

Mat6 matmul(const Mat6& x, const Mat6& y) {
    Mat6 r{};
    for (int i = 0; i < 6; ++i)
        for (int k = 0; k < 6; ++k) {
            const real_t v = x[i][k];
            if (v == 0.0L) continue;
            for (int j = 0; j < 6; ++j) r[i][j] += v * y[k][j];
        }
    return r;
}

real_t trace(const Mat6& x) {
    real_t t = 0.0L;
    for (int i = 0; i < 6; ++i) t += x[i][i];
    return t;
}

real_t det6(Mat6 x) {
    real_t det = 1.0L;
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(x[r][col]) > std::abs(x[piv][col])) piv = r;
        if (x[piv][col] == 0.0L) return 0.0L;
        if (piv != col) {
            std::swap(x[piv], x[col]);
            det = -det;
        }
        det *= x[col][col];
        for (int r = col + 1; r < 6; ++r) {
            const real_t f = x[r][col] / x[col][col];
            for (int j = col; j < 6; ++j) x[r][j] -= f * x[col][j];
        }
    }
    return det;
}

// three real roots of x^3 - e1 x^2 + e2 x - e3 = 0 (symplectic invariants
// guarantee real nonnegative roots), trigonometric method + Newton polish
std::array<real_t, 3> cubic_roots(real_t e1, real_t e2, real_t e3) {
    const real_t A = -e1, B = e2, C = -e3;
    const real_t p = B - A * A / 3.0L;
    const real_t q = 2.0L * A * A * A / 27.0L - A * B / 3.0L + C;
    std::array<real_t, 3> y{};
    if (p >= -1e-300L) {
        const real_t r = std::cbrt(static_cast<double>(-q));
        y = {r, r, r};
    } else {
        const real_t m = 2.0L * std::sqrt(-p / 3.0L);
        real_t arg = 3.0L * q / (p * m);
        arg = std::clamp(arg, -1.0L, 1.0L);
        const real_t phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            y[static_cast<std::size_t>(k)] =
                m * std::cos(phi / 3.0L - 2.094395102393195492308L * k);
    }
    std::array<real_t, 3> x{};
    for (int k = 0; k < 3; ++k) {
        real_t r = y[static_cast<std::size_t>(k)] - A / 3.0L;
        // polish; skipped near repeated roots where f' vanishes
        for (int it = 0; it < 4; ++it) {
            const real_t f = ((r + A) * r + B) * r + C;
            const real_t df = (3.0L * r + 2.0L * A) * r + B;
            if (df == 0.0L) break;
            const real_t step = f / df;
            if (!(std::abs(step) < 0.05L * std::max<real_t>(1.0L, std::abs(r)))) break;
            r -= step;
        }
        x[static_cast<std::size_t>(k)] = r;
    }
    return x;
}

// gamma_ACD | heterodyne B, using the scalar Schur complement (gamma_B = b2 I)
Mat6 conditional_cm(const TrustedModel& m) {
    const real_t w = m.w, b = m.b, a = m.a, c = m.c, ct = m.ct, st = m.st, wc = m.wc;
    const real_t d = static_cast<real_t>(m.b2) + 1.0L;
    const real_t u = ct * c;            // A-B correlation
    const real_t v = ct * st * (w - b); // C-B
    const real_t y = st * wc;           // D-B

    const real_t A1 = a - u * u / d;
    const real_t AC = -st * c - u * v / d;  // sz block
    const real_t AD = -u * y / d;           // I block
    const real_t C1 = st * st * b + ct * ct * w - v * v / d;
    const real_t CD = ct * wc - v * y / d;  // sz block
    const real_t D1 = w - y * y / d;

    Mat6 g{};
    auto set_diag = [&](int mode, real_t val) {
        g[2 * mode][2 * mode] = val;
        g[2 * mode + 1][2 * mode + 1] = val;
    };
    auto set_sz = [&](int m1, int m2, real_t val) {
        g[2 * m1][2 * m2] = val;
        g[2 * m1 + 1][2 * m2 + 1] = -val;
        g[2 * m2][2 * m1] = val;
        g[2 * m2 + 1][2 * m1 + 1] = -val;
    };
    auto set_id = [&](int m1, int m2, real_t val) {
        g[2 * m1][2 * m2] = val;
        g[2 * m1 + 1][2 * m2 + 1] = val;
        g[2 * m2][2 * m1] = val;
        g[2 * m2 + 1][2 * m1 + 1] = val;
    };
    set_diag(0, A1);
    set_diag(1, C1);
    set_diag(2, D1);
    set_sz(0, 1, AC);
    set_id(0, 2, AD);
    set_sz(1, 2, CD);
    return g;
}

// two-mode spectrum for [[a I, k Moff], [k Moff, b I]] with Moff in {sz, I};
// det(k sz) = -k^2, det(k I) = +k^2
std::array<real_t, 2> two_mode_nu2(real_t a, real_t b, real_t k, bool sz_type) {
    const real_t detc = sz_type ? -k * k : k * k;
    const real_t delta = a * a + b * b + 2.0L * detc;
    const real_t det4 = (a * b - k * k) * (a * b - k * k);
    const real_t rad = std::sqrt(std::max<real_t>(delta * delta - 4.0L * det4, 0.0L));
    return {(delta + rad) / 2.0L, (delta - rad) / 2.0L};
}

double entropy_from_nu2(real_t x, real_t e1, real_t e2, real_t e3) {
    // snap near-unit roots that satisfy the characteristic polynomial at 1
    if (std::abs(x - 1.0L) < 1e-6L) {
        const real_t f1 = 1.0L - e1 + e2 - e3;
        const real_t scale =
            std::max({real_t{1.0L}, std::abs(e1), std::abs(e2), std::abs(e3)});
        if (std::abs(f1) <= 1e-12L * scale) x = 1.0L;
    }
    if (x < (1.0L - 1e-9L) * (1.0L - 1e-9L))
        throw NumericalInstability("holevo_bound: symplectic eigenvalue below 1");
    return g_entropy(static_cast<double>(std::sqrt(std::max<real_t>(x, 1.0L))));
}

double conditional_entropy_closed(const TrustedModel& m) {
    const Mat6 gamma = conditional_cm(m);
    const real_t diagA = gamma[0][0], diagC = gamma[2][2], diagD = gamma[4][4];
    const real_t cAC = gamma[0][2];  // sz block
    const real_t cAD = gamma[0][4];  // I block
    const real_t cCD = gamma[2][4];  // sz block
    const real_t scale = std::max({real_t{1.0L}, diagA, diagC, diagD});
    const real_t tiny = 1e-14L * scale;

    // decoupled modes contribute exactly; common in the degenerate trusted
    // limits (tau -> 1 or V_el -> 0)
    const bool d_free = std::abs(cAD) < tiny && std::abs(cCD) < tiny;
    const bool c_free = std::abs(cAC) < tiny && std::abs(cCD) < tiny;
    const bool a_free = std::abs(cAC) < tiny && std::abs(cAD) < tiny;
    if (d_free || c_free || a_free) {
        real_t lone, pa, pb, k;
        bool sz_type;
        if (d_free) {
            lone = diagD; pa = diagA; pb = diagC; k = cAC; sz_type = true;
        } else if (c_free) {
            lone = diagC; pa = diagA; pb = diagD; k = cAD; sz_type = false;
        } else {
            lone = diagA; pa = diagC; pb = diagD; k = cCD; sz_type = true;
        }
        const auto pair = two_mode_nu2(pa, pb, k, sz_type);
        double s = 0.0;
        for (real_t x : {lone * lone, pair[0], pair[1]}) {
            if (x < (1.0L - 1e-9L) * (1.0L - 1e-9L))
                throw NumericalInstability("holevo_bound: symplectic eigenvalue below 1");
            s += g_entropy(static_cast<double>(std::sqrt(std::max<real_t>(x, 1.0L))));
        }
        return s;
    }

    // M = Omega gamma with Omega = diag([[0,1],[-1,0]])
    Mat6 M{};
    for (int mode = 0; mode < 3; ++mode)
        for (int j = 0; j < 6; ++j) {
            M[2 * mode][j] = gamma[2 * mode + 1][j];
            M[2 * mode + 1][j] = -gamma[2 * mode][j];
        }
    const Mat6 M2 = matmul(M, M);
    const Mat6 M4 = matmul(M2, M2);
    const real_t sum_nu2 = -trace(M2) / 2.0L;  // tr((i Omega g)^2) = -tr(M^2)
    const real_t sum_nu4 = trace(M4) / 2.0L;
    const real_t e1 = sum_nu2;
    const real_t e2 = (e1 * e1 - sum_nu4) / 2.0L;
    const real_t e3 = det6(gamma);

    const auto nu2 = cubic_roots(e1, e2, e3);
    double s = 0.0;
    for (real_t x : nu2) s += entropy_from_nu2(x, e1, e2, e3);
    return s;
}

// --- numerical oracle: assemble the full state and diagonalize ------------

using Eigen::MatrixXd;

MatrixXd assemble_abcd(const TrustedModel& m) {
    MatrixXd g0 = MatrixXd::Zero(8, 8);
    auto put2 = [&](int r, int c, double diag, double anti) {
        g0(r, c) = diag;
        g0(r + 1, c + 1) = anti;
    };
    // product state: (A, B1) TMS-like after channel, (C0, D) EPR of variance w
    put2(0, 0, m.a, m.a);
    put2(2, 2, m.b, m.b);
    put2(0, 2, m.c, -m.c);
    put2(2, 0, m.c, -m.c);
    put2(4, 4, m.w, m.w);
    put2(6, 6, m.w, m.w);
    put2(4, 6, m.wc, -m.wc);
    put2(6, 4, m.wc, -m.wc);

    MatrixXd S = MatrixXd::Identity(8, 8);
    S.block(2, 2, 2, 2) = m.ct * Eigen::Matrix2d::Identity();
    S.block(2, 4, 2, 2) = m.st * Eigen::Matrix2d::Identity();
    S.block(4, 2, 2, 2) = -m.st * Eigen::Matrix2d::Identity();
    S.block(4, 4, 2, 2) = m.ct * Eigen::Matrix2d::Identity();
    return S * g0 * S.transpose();
}

std::vector<double> symplectic_spectrum(const MatrixXd& gamma) {
    // |eig(i Omega gamma)| equals the spectrum of the Hermitian matrix
    // sqrt(gamma) (i Omega) sqrt(gamma); the self-adjoint solve keeps full
    // accuracy for eigenvalues near 1 where the entropy derivative diverges
    const Eigen::Index n = gamma.rows() / 2;
    Eigen::SelfAdjointEigenSolver<MatrixXd> root_solver(gamma);
    if (root_solver.eigenvalues().minCoeff() < -1e-12)
        throw NumericalInstability("holevo_bound_numeric: covariance not positive");
    MatrixXd sqrt_g = root_solver.operatorSqrt();

    MatrixXd omega = MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    Eigen::MatrixXcd herm =
        std::complex<double>(0.0, 1.0) * (sqrt_g * omega * sqrt_g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm,
                                                       Eigen::EigenvaluesOnly);
    std::vector<double> mags(static_cast<std::size_t>(2 * n));
    for (Eigen::Index i = 0; i < 2 * n; ++i)
        mags[static_cast<std::size_t>(i)] = std::abs(es.eigenvalues()(i));
    std::sort(mags.begin(), mags.end());
    std::vector<double> nus;
    for (std::size_t i = 0; i < mags.size(); i += 2) nus.push_back(mags[i]);
    return nus;
}

double spectrum_entropy(const std::vector<double>& nus) {
    double s = 0.0;
    for (double nu : nus) {
        if (nu < 1.0 - 1e-9)
            throw NumericalInstability("holevo_bound_numeric: eigenvalue below 1");
        s += g_entropy(std::max(nu, 1.0));
    }
    return s;
}

}  // namespace

double g_entropy(double x) {
    if (x < 1.0 - 1e-9) throw DomainError("g_entropy: argument below 1");
    if (x <= 1.0) return 0.0;
    const double hp = (x + 1.0) / 2.0;
    const double hm = (x - 1.0) / 2.0;
    return log2_halfx(hp) - log2_halfx(hm);
}

double mutual_information(const ChannelParams& p) {
    p.validate();
    const double snr_q =
        (p.tau * p.eta * p.v_mod / 2.0) / (1.0 + (p.tau * p.xi + p.v_el) / 2.0);
    // x and p quadratures contribute (1/2) log2(1 + SNR) each
    return std::log2(1.0 + snr_q);
}

double holevo_bound(const ChannelParams& p) {
    const TrustedModel m = build_model(p);
    const double s_abcd = two_mode_entropy({m.a, m.b, m.c});  // = S(AB1)
    const double s_cond = conditional_entropy_closed(m);
    return std::max(s_abcd - s_cond, 0.0);
}

double holevo_bound_numeric(const ChannelParams& p) {
    const TrustedModel m = build_model(p);
    const MatrixXd gamma = assemble_abcd(m);
    const double s_abcd = spectrum_entropy(symplectic_spectrum(gamma));

    // condition on heterodyne of B (modes ordered A, B, C, D)
    const std::array<Eigen::Index, 6> keep = {0, 1, 4, 5, 6, 7};
    MatrixXd ga(6, 6);
    MatrixXd sig(6, 2);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) ga(i, j) = gamma(keep[static_cast<std::size_t>(i)],
                                                     keep[static_cast<std::size_t>(j)]);
        for (int j = 0; j < 2; ++j) sig(i, j) = gamma(keep[static_cast<std::size_t>(i)], 2 + j);
    }
    MatrixXd gb = gamma.block(2, 2, 2, 2) + Eigen::Matrix2d::Identity();
    MatrixXd cond = ga - sig * gb.inverse() * sig.transpose();
    const double s_cond = spectrum_entropy(symplectic_spectrum(cond));
    return s_abcd - s_cond;
}

double delta_n(double n, double eps_bar, double eps_pa) {
    if (!(n >= 1.0)) throw ConfigError("delta_n: n must be >= 1");
    return 7.0 * std::sqrt(std::log2(2.0 / eps_bar) / n) + (2.0 / n) * std::log2(1.0 / eps_pa);
}

namespace {

KeyRateReport key_rate_impl(const ChannelParams& p, double eta_wc, double xi_wc,
                            double beta, double fer, double n_blocksize,
                            const EpsilonBudget& eps, RateMode mode,
                            double symbol_rate_hz) {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("key_rate: beta in [0, 1]");
    if (!(fer >= 0.0 && fer < 1.0)) throw ConfigError("key_rate: fer in [0, 1)");
    eps.validate();

    KeyRateReport r;
    r.mode = mode;
    r.beta = beta;
    r.fer = fer;
    r.n_blocksize = n_blocksize;
    r.symbol_rate_hz = symbol_rate_hz;
    r.rate_asymptotic =
        std::max(0.0, beta * mutual_information(p) - holevo_bound(p));

    if (mode == RateMode::finite) {
        if (!(n_blocksize >= 1.0)) throw ConfigError("key_rate: finite mode needs N >= 1");
        ChannelParams wc = p;
        wc.eta = std::max(eta_wc, 1e-15);
        wc.xi = std::max(xi_wc, 0.0);
        r.eta_wc = wc.eta;
        r.xi_wc = wc.xi;
        r.i_ab = mutual_information(wc);
        r.chi_e = holevo_bound(wc);
        r.n_pa = (1.0 - fer) * n_blocksize;
        r.delta_n = delta_n(r.n_pa, eps.eps_bar, eps.eps_pa);
        const double core = beta * r.i_ab - r.chi_e - r.delta_n;
        r.rate_finite = std::max(0.0, core);
        r.rate_clamped_zero = core < 0.0;
    } else {
        r.i_ab = mutual_information(p);
        r.chi_e = holevo_bound(p);
        r.delta_n = 0.0;
        r.eta_wc = p.eta;
        r.xi_wc = p.xi;
        r.rate_clamped_zero = beta * r.i_ab - r.chi_e < 0.0;
    }
    const double rate = r.rate();
    r.skr_gross_bps = rate * symbol_rate_hz;
    r.skr_bps = rate * symbol_rate_hz * (1.0 - fer);
    return r;
}

}  // namespace

KeyRateReport key_rate(const ChannelParams& p, double beta, double fer, double n_blocksize,
                       const EpsilonBudget& eps, RateMode mode, const PeConvention& conv,
                       double symbol_rate_hz) {
    double eta_wc = p.eta, xi_wc = p.xi;
    if (mode == RateMode::finite)
        estimation::worst_case_from_true(p, n_blocksize, eps.eps_pe, conv, eta_wc, xi_wc);
    return key_rate_impl(p, eta_wc, xi_wc, beta, fer, n_blocksize, eps, mode,
                         symbol_rate_hz);
}

KeyRateReport key_rate_from_estimate(const ParamEstimate& est, double beta, double fer,
                                     double n_blocksize, const EpsilonBudget& eps,
                                     const PeConvention& conv, double symbol_rate_hz) {
    ParamEstimate e = est;
    estimation::confidence_interval(e, eps.eps_pe, conv);
    ChannelParams p;
    p.v_mod = e.v_mod;
    p.eta = std::clamp(e.eta_hat, 1e-15, 1.0);
    p.xi = std::max(e.xi_hat, 0.0);
    p.tau = e.tau;
    p.v_el = e.v_el;
    return key_rate_impl(p, e.eta_wc, e.xi_wc, beta, fer, n_blocksize, eps,
                         RateMode::finite, symbol_rate_hz);
}

std::vector<LossSweepPoint> rate_vs_loss_sweep(const ChannelParams& base,
                                               const std::vector<double>& loss_grid_db,
                                               double beta, double fer, RateMode mode,
                                               double n_blocksize, const EpsilonBudget& eps,
                                               const PeConvention& conv) {
    std::vector<LossSweepPoint> out;
    out.reserve(loss_grid_db.size());
    for (double loss : loss_grid_db) {
        ChannelParams p = base;
        p.eta = snu::db_to_transmittance(loss);
        LossSweepPoint pt;
        pt.loss_db = loss;
        pt.eta = p.eta;
        pt.rate_asymptotic = key_rate(p, beta, fer, n_blocksize, eps,
                                      RateMode::asymptotic, conv)
                                 .rate_asymptotic;
        if (mode == RateMode::finite || n_blocksize >= 1.0)
            pt.rate_finite =
                key_rate(p, beta, fer, std::max(n_blocksize, 1.0), eps, RateMode::finite,
                         conv)
                    .rate_finite;
        out.push_back(pt);
    }
    return out;
}

double cutoff_loss_db(const std::vector<LossSweepPoint>& sweep, RateMode mode) {
    double cutoff = -1.0;
    for (const auto& pt : sweep) {
        const double r = mode == RateMode::finite ? pt.rate_finite : pt.rate_asymptotic;
        if (r > 0.0) cutoff = std::max(cutoff, pt.loss_db);
    }
    return cutoff;
}

FeasibilityGrid blocksize_beta_grid(const ChannelParams& p,
                                    const std::vector<double>& n_grid,
                                    const std::vector<double>& beta_grid,
                                    const EpsilonBudget& eps, double fer,
                                    const PeConvention& conv) {
    FeasibilityGrid grid;
    grid.beta_grid = beta_grid;
    grid.min_n_per_beta.assign(beta_grid.size(), std::numeric_limits<double>::infinity());
    for (std::size_t bi = 0; bi < beta_grid.size(); ++bi) {
        for (double n : n_grid) {
            const auto r =
                key_rate(p, beta_grid[bi], fer, n, eps, RateMode::finite, conv);
            grid.points.push_back({n, beta_grid[bi], r.rate_finite});
            if (r.rate_finite > 0.0)
                grid.min_n_per_beta[bi] = std::min(grid.min_n_per_beta[bi], n);
        }
    }
    return grid;
}

VmOptimum optimize_modulation_variance(double eta, double xi_base, double xi_slope,
                                       double tau, double v_el, double beta, double fer,
                                       RateMode mode, double n_blocksize,
                                       const EpsilonBudget& eps, const PeConvention& conv,
                                       double v_lo, double v_hi) {
    if (xi_slope < 0.0) throw ConfigError("optimize_modulation_variance: slope must be >= 0");
    auto rate_at = [&](double vm) {
        ChannelParams p;
        p.v_mod = vm;
        p.eta = eta;
        p.xi = xi_base + xi_slope * vm;
        p.tau = tau;
        p.v_el = v_el;
        return key_rate(p, beta, fer, n_blocksize, eps, mode, conv).rate();
    };

    // coarse scan to bracket the optimum, then golden-section refinement
    const int coarse = 256;
    double best_v = v_lo, best_r = -1.0;
    for (int i = 0; i <= coarse; ++i) {
        const double v = v_lo + (v_hi - v_lo) * static_cast<double>(i) / coarse;
        const double r = rate_at(v);
        if (r > best_r) {
            best_r = r;
            best_v = v;
        }
    }
    if (best_r <= 0.0)
        throw NoPositiveRate("optimize_modulation_variance: rate is zero over the range");

    const double step = (v_hi - v_lo) / coarse;
    double lo = std::max(v_lo, best_v - step);
    double hi = std::min(v_hi, best_v + step);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = rate_at(x1), f2 = rate_at(x2);
    for (int it = 0; it < 80 && hi - lo > 1e-6; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = rate_at(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = rate_at(x1);
        }
    }
    VmOptimum opt;
    opt.v_mod = 0.5 * (lo + hi);
    opt.rate = rate_at(opt.v_mod);
    opt.xi_at_optimum = xi_base + xi_slope * opt.v_mod;
    return opt;
}

}  // namespace security
}  // namespace cvqkd

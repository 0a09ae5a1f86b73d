#include "cvqkd/estimation.hpp"

#include <cmath>

namespace cvqkd::estimation {

double z_quantile(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("z_quantile: eps must be in (0, 1)");
    // solve erfc(x) = eps by Newton from the asymptotic seed, then z = sqrt(2) x
    double x = std::sqrt(std::max(-std::log(eps * std::sqrt(3.141592653589793) *
                                            std::sqrt(-std::log(eps))),
                                  0.5));
    for (int it = 0; it < 60; ++it) {
        const double f = std::erfc(x) - eps;
        const double df = -2.0 / std::sqrt(3.141592653589793) * std::exp(-x * x);
        const double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(x))) break;
    }
    return std::sqrt(2.0) * x;
}

ParamEstimate estimate_from_moments(const kernels::PairMoments& m, double tau, double v_el,
                                    double v_mod) {
    if (m.n == 0) throw InsufficientData("estimate_params: empty block");
    if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("estimate_params: tau in (0, 1]");
    if (!(v_mod > 0.0)) throw ConfigError("estimate_params: v_mod must be positive");

    const double n = static_cast<double>(m.n);
    const cplx ma = m.sum_a / n;
    const cplx mb = m.sum_b / n;
    // per-quadrature central moments, both quadratures pooled
    const double var_rx = 0.5 * (m.sum_bb / n - std::norm(mb));
    const double cov = 0.5 * (m.sum_ab_re / n -
                              (ma.real() * mb.real() + ma.imag() * mb.imag()));
    if (cov < 0.0)
        throw NegativeTransmittance("estimate_params: negative tx-rx covariance (sync?)");

    ParamEstimate est;
    est.n_symbols = m.n;
    est.moments = m;
    est.cov_xy = cov;
    est.var_rx = var_rx;
    est.tau = tau;
    est.v_el = v_el;
    est.v_mod = v_mod;
    est.t_hat = cov / v_mod;
    est.eta_hat = est.t_hat * est.t_hat / tau;
    est.s_hat = var_rx - est.t_hat * est.t_hat * v_mod;
    // xi referenced to the channel output; sampling fluctuations may push it
    // negative and it is reported as-is
    est.xi_hat = (est.s_hat - 1.0 - v_el) / tau;
    return est;
}

ParamEstimate estimate_params(const SymbolBlock& block, double tau, double v_el,
                              double v_mod) {
    if (block.rx.size() != block.tx.size())
        throw InsufficientData("estimate_params: block has no paired rx symbols");
    const auto m = kernels::pair_moments(std::span<const cplx>(block.tx),
                                         std::span<const cplx>(block.rx));
    return estimate_from_moments(m, tau, v_el, v_mod);
}

namespace {

void worst_case_impl(double t, double s, double v_mod, double tau, double m, double z,
                     double xi_hat, double& eta_wc, double& xi_wc) {
    const double sig_t = std::sqrt((2.0 * t * t + s / v_mod) / m);
    const double tv = t * t * v_mod;
    const double sig_s = std::sqrt(2.0 * (s * s + tv * tv) / m);
    const double t_wc = std::max(t - z * sig_t, 0.0);
    eta_wc = t_wc * t_wc / tau;
    xi_wc = xi_hat + z * sig_s / tau;
}

}  // namespace

void confidence_interval(ParamEstimate& est, double epsilon_pe, const PeConvention& conv,
                         std::uint64_t min_symbols) {
    if (est.n_symbols < min_symbols)
        throw InsufficientData("confidence_interval: below the Gaussian-regime floor of " +
                               std::to_string(min_symbols) + " symbols");
    const double z = z_quantile(epsilon_pe);
    const double m = conv.effective_m(static_cast<double>(est.n_symbols));
    worst_case_impl(est.t_hat, est.s_hat, est.v_mod, est.tau, m, z, est.xi_hat, est.eta_wc,
                    est.xi_wc);
    est.epsilon_pe = epsilon_pe;
}

void worst_case_from_true(const ChannelParams& p, double n_symbols, double epsilon_pe,
                          const PeConvention& conv, double& eta_wc, double& xi_wc) {
    p.validate();
    const double z = z_quantile(epsilon_pe);
    const double t = std::sqrt(p.tau * p.eta);
    const double s = 1.0 + p.v_el + p.tau * p.xi;
    worst_case_impl(t, s, p.v_mod, p.tau, conv.effective_m(n_symbols), z, p.xi, eta_wc,
                    xi_wc);
}

std::vector<SeriesPoint> cumulative_series(std::span<const ParamEstimate> frames,
                                           double epsilon_pe, const PeConvention& conv) {
    if (frames.empty()) return {};
    const double z = z_quantile(epsilon_pe);
    std::vector<SeriesPoint> out;
    out.reserve(frames.size());
    kernels::PairMoments pooled;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        pooled += frames[i].moments;
        ParamEstimate e = estimate_from_moments(pooled, frames[i].tau, frames[i].v_el,
                                                frames[i].v_mod);
        const double m = conv.effective_m(static_cast<double>(e.n_symbols));
        const double tv = e.t_hat * e.t_hat * e.v_mod;
        const double sig_s = std::sqrt(2.0 * (e.s_hat * e.s_hat + tv * tv) / m);
        SeriesPoint p;
        p.frame_index = i;
        p.accumulated_symbols = e.n_symbols;
        p.xi_hat = e.xi_hat;
        p.ci_low = e.xi_hat - z * sig_s / e.tau;
        p.ci_high = e.xi_hat + z * sig_s / e.tau;
        out.push_back(p);
    }
    return out;
}

}  // namespace cvqkd::estimation

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cvqkd/kernels.hpp"
#include "cvqkd/snu.hpp"
#include "cvqkd/txdsp.hpp"

namespace cvqkd {

// How much data backs the parameter-estimation confidence intervals.
// Default: a half-block subset with single-quadrature variance forms
// (conservative); reconciliation-first, so nothing is sacrificed.
struct PeConvention {
    double subset_fraction = 0.5;
    bool pool_quadratures = false;

    double effective_m(double n_symbols) const {
        return subset_fraction * (pool_quadratures ? 2.0 : 1.0) * n_symbols;
    }
};

struct ParamEstimate {
    double eta_hat = 0.0;
    double xi_hat = 0.0;      // SNU, channel-output convention; may be negative
    std::uint64_t n_symbols = 0;
    double cov_xy = 0.0;      // per-quadrature tx-rx covariance
    double var_rx = 0.0;      // per-quadrature rx variance
    double t_hat = 0.0;       // sqrt(tau eta) estimate
    double s_hat = 0.0;       // residual noise variance 1 + V_el + tau xi
    // worst case at epsilon_pe (filled by confidence_interval)
    double eta_wc = 0.0;
    double xi_wc = 0.0;
    double epsilon_pe = 0.0;
    // context
    double tau = 1.0;
    double v_el = 0.0;
    double v_mod = 1.0;
    kernels::PairMoments moments;  // sufficient statistics for pooling
};

struct SeriesPoint {
    std::uint64_t frame_index = 0;
    std::uint64_t accumulated_symbols = 0;
    double xi_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
};

namespace estimation {

// Two-sided Gaussian quantile: P(|Z| > z) = eps.
double z_quantile(double eps);

ParamEstimate estimate_from_moments(const kernels::PairMoments& m, double tau, double v_el,
                                    double v_mod);

// Pooled two-quadrature point estimates from a paired block in SNU.
ParamEstimate estimate_params(const SymbolBlock& block, double tau, double v_el,
                              double v_mod);

// Worst-case bounds (eta low, xi high) at epsilon_pe.
// eta_wc = (t_hat - z sigma_t)^2 / tau, xi_wc = xi_hat + z sigma_s / tau with
// sigma_t^2 = (2 t^2 + s/V_M)/m and sigma_s^2 = 2 (s^2 + (t^2 V_M)^2)/m.
void confidence_interval(ParamEstimate& est, double epsilon_pe,
                         const PeConvention& conv = {},
                         std::uint64_t min_symbols = 100'000);

// Expected-estimator variant used by the parameter-only key-rate path.
void worst_case_from_true(const ChannelParams& p, double n_symbols, double epsilon_pe,
                          const PeConvention& conv, double& eta_wc, double& xi_wc);

// Pooled cumulative excess-noise series (sufficient-statistic merge).
std::vector<SeriesPoint> cumulative_series(std::span<const ParamEstimate> frames,
                                           double epsilon_pe,
                                           const PeConvention& conv = {});

}  // namespace estimation
}  // namespace cvqkd

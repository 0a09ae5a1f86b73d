#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cvqkd/estimation.hpp"
#include "cvqkd/snu.hpp"

namespace cvqkd {

struct EpsilonBudget {
    double eps_pe = 1e-10;
    double eps_pa = 1e-10;
    double eps_bar = 1e-10;   // smoothing parameter
    double eps_total = 3e-10;

    void validate() const;
};

enum class RateMode { asymptotic, finite };

struct KeyRateReport {
    double i_ab = 0.0;            // bits/use, both quadratures
    double chi_e = 0.0;           // bits/use
    double delta_n = 0.0;         // bits/use (0 in asymptotic mode)
    double rate_asymptotic = 0.0; // bits/use at true parameters
    double rate_finite = 0.0;     // bits/use at worst-case parameters (finite mode)
    bool rate_clamped_zero = false;
    double eta_wc = 0.0;
    double xi_wc = 0.0;
    double beta = 0.0;
    double fer = 0.0;
    double n_blocksize = 0.0;
    double n_pa = 0.0;            // (1 - FER) N, the PA block behind delta_n
    double symbol_rate_hz = 125e6;
    // net key throughput per the (1-FER) bookkeeping, and the gross
    // bits/use x symbol-rate product as reported in the reference results
    double skr_bps = 0.0;
    double skr_gross_bps = 0.0;
    RateMode mode = RateMode::asymptotic;

    double rate() const {
        return mode == RateMode::finite ? rate_finite : rate_asymptotic;
    }
};

struct LossSweepPoint {
    double loss_db = 0.0;
    double eta = 0.0;
    double rate_asymptotic = 0.0;
    double rate_finite = 0.0;
};

struct GridPoint {
    double n_blocksize = 0.0;
    double beta = 0.0;
    double rate = 0.0;
};

struct FeasibilityGrid {
    std::vector<GridPoint> points;
    std::vector<double> beta_grid;
    std::vector<double> min_n_per_beta;  // infinity when nothing on the grid is positive
};

namespace security {

// Bosonic entropy g(x) = ((x+1)/2) log2((x+1)/2) - ((x-1)/2) log2((x-1)/2).
double g_entropy(double x);

// I(A:B), both quadratures, heterodyne penalty included:
// per quadrature SNR = (tau eta V_M / 2) / (1 + (tau xi + V_el)/2).
double mutual_information(const ChannelParams& p);

// Holevo bound chi_E = S(ABCD) - S(ACD|B) for the trusted-receiver model:
// channel purified by Eve, detector as a beamsplitter tau coupled to an EPR
// pair of variance 1 + V_el/(1-tau), heterodyne conditioning on B.
// Closed form: two-mode formula for S(ABCD) = S(AB1), analytic cubic for the
// three conditional symplectic eigenvalues.
double holevo_bound(const ChannelParams& p);

// Independent route: numerical symplectic spectra (|eig(i Omega gamma)|) of
// the assembled 8x8 state and 6x6 conditional matrix.
double holevo_bound_numeric(const ChannelParams& p);

// Finite-size correction (privacy amplification), dominated by
// 7 sqrt(log2(2/eps_bar)/n); n is the PA block length.
double delta_n(double n, double eps_bar = 1e-10, double eps_pa = 1e-10);

KeyRateReport key_rate(const ChannelParams& p, double beta, double fer, double n_blocksize,
                       const EpsilonBudget& eps, RateMode mode,
                       const PeConvention& conv = {}, double symbol_rate_hz = 125e6);

// Data path: worst-case bounds taken from an actual estimate.
KeyRateReport key_rate_from_estimate(const ParamEstimate& est, double beta, double fer,
                                     double n_blocksize, const EpsilonBudget& eps,
                                     const PeConvention& conv = {},
                                     double symbol_rate_hz = 125e6);

std::vector<LossSweepPoint> rate_vs_loss_sweep(const ChannelParams& base,
                                               const std::vector<double>& loss_grid_db,
                                               double beta, double fer, RateMode mode,
                                               double n_blocksize, const EpsilonBudget& eps,
                                               const PeConvention& conv = {});

// Last grid loss with a positive rate; negative when never positive.
double cutoff_loss_db(const std::vector<LossSweepPoint>& sweep, RateMode mode);

FeasibilityGrid blocksize_beta_grid(const ChannelParams& p,
                                    const std::vector<double>& n_grid,
                                    const std::vector<double>& beta_grid,
                                    const EpsilonBudget& eps, double fer,
                                    const PeConvention& conv = {});

struct VmOptimum {
    double v_mod = 0.0;
    double rate = 0.0;
    double xi_at_optimum = 0.0;
};

// argmax over V_M of the key rate with the linear phase-noise model
// xi(V_M) = xi_base + slope * V_M. Throws NoPositiveRate when the whole
// search range is infeasible.
VmOptimum optimize_modulation_variance(double eta, double xi_base, double xi_slope,
                                       double tau, double v_el, double beta, double fer,
                                       RateMode mode, double n_blocksize,
                                       const EpsilonBudget& eps,
                                       const PeConvention& conv = {},
                                       double v_lo = 0.05, double v_hi = 40.0);

}  // namespace security
}  // namespace cvqkd

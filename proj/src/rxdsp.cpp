#include "cvqkd/rxdsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cvqkd/spectral.hpp"

namespace cvqkd {

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoPi = 2.0 * kPi;
}  // namespace

void UkfConfig::validate() const {
    if (!(process_noise_var > 0.0)) throw ConfigError("UkfConfig.process_noise_var must be > 0");
    if (measurement_noise_var < 0.0)
        throw ConfigError("UkfConfig.measurement_noise_var must be >= 0");
    if (!(init_phase_var > 0.0)) throw ConfigError("UkfConfig.init_phase_var must be > 0");
    if (!(alpha > 0.0)) throw ConfigError("UkfConfig.alpha must be > 0");
}

Equalizer::Equalizer(const CalibrationRecord& cal, double eq_band_hz) {
    fs_hz_ = cal.fs_hz;
    const std::size_t n = cal.vacuum_psd.size();
    if (n == 0 || cal.electronic_psd.size() != n)
        throw SingularPsd("equalizer: calibration PSDs missing or mismatched");

    // smooth both spectra, then equalize against the shot-only difference
    const auto sv = spectral::smooth_circular(cal.vacuum_psd, 16);
    const auto se = spectral::smooth_circular(cal.electronic_psd, 16);

    std::vector<double> diff(n);
    double band_mean = 0.0;
    std::size_t band_count = 0;
    for (std::size_t k = 0; k < n; ++k) {
        diff[k] = sv[k] - se[k];
        const double f = spectral::bin_freq(k, n, fs_hz_);
        if (std::abs(f) <= eq_band_hz) {
            if (!(diff[k] > 0.0))
                throw SingularPsd("equalizer: non-positive shot spectrum in band");
            band_mean += diff[k];
            ++band_count;
        }
    }
    if (band_count == 0) throw SingularPsd("equalizer: empty equalization band");
    band_mean /= static_cast<double>(band_count);

    seg_gain_.assign(n, 1.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = spectral::bin_freq(k, n, fs_hz_);
        if (std::abs(f) <= eq_band_hz) {
            double g = std::sqrt(band_mean / diff[k]);
            seg_gain_[k] = std::clamp(g, 0.2, 5.0);
        }
    }
}

std::vector<double> Equalizer::gains(std::size_t n, double /*fs_hz*/) const {
    return spectral::resample_psd(seg_gain_, n);
}

namespace rxdsp {

// ---------------------------------------------------------------------------

void whitening_filter(cbuf& frame, const CalibrationRecord& cal, double fs_hz) {
    Equalizer eq(cal);
    const auto g = eq.gains(frame.size(), fs_hz);
    fft::forward(frame);
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(frame.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k)
        frame[static_cast<std::size_t>(k)] *= g[static_cast<std::size_t>(k)];
    fft::inverse(frame);
}

namespace {

// Extract a K-bin band centered on bin c (c mapped to DC) and IFFT to the
// band rate. Amplitudes preserved (1/N overall normalization).
std::vector<cplx> band_to_time(const cbuf& spectrum, std::size_t c, std::size_t K) {
    const std::size_t N = spectrum.size();
    std::vector<cplx> band(K);
    for (std::size_t j = 0; j < K; ++j) {
        const std::ptrdiff_t rel = static_cast<std::ptrdiff_t>(j) -
                                   static_cast<std::ptrdiff_t>(K / 2);
        const std::size_t src =
            static_cast<std::size_t>((static_cast<std::ptrdiff_t>(c) + rel +
                                      static_cast<std::ptrdiff_t>(N)) %
                                     static_cast<std::ptrdiff_t>(N));
        const std::size_t dst = static_cast<std::size_t>(
            (rel + static_cast<std::ptrdiff_t>(K)) % static_cast<std::ptrdiff_t>(K));
        band[dst] = spectrum[src];
    }
    std::vector<cplx> out(K);
    fft::inverse(band.data(), out.data(), K);
    const double scale = static_cast<double>(K) / static_cast<double>(N);
    for (auto& v : out) v *= scale;
    return out;
}

Pilot extract_pilot_from_spectrum(const cbuf& spectrum, double fs_hz, double f_expected_hz,
                                  double bandwidth_hz, double search_halfwidth_hz,
                                  double min_snr_db) {
    const std::size_t N = spectrum.size();
    const double df = fs_hz / static_cast<double>(N);

    // coarse peak search in the window
    const std::size_t c0 = spectral::freq_bin(f_expected_hz, N, fs_hz);
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(search_halfwidth_hz / df);
    std::size_t peak = c0;
    double peak_mag = -1.0;
    for (std::ptrdiff_t d = -half; d <= half; ++d) {
        const std::size_t k = static_cast<std::size_t>(
            (static_cast<std::ptrdiff_t>(c0) + d + static_cast<std::ptrdiff_t>(N)) %
            static_cast<std::ptrdiff_t>(N));
        const double m = std::norm(spectrum[k]);
        if (m > peak_mag) {
            peak_mag = m;
            peak = k;
        }
    }

    const std::size_t K = static_cast<std::size_t>(std::lround(bandwidth_hz / df));
    Pilot p;
    p.fs_dec_hz = static_cast<double>(K) * df;
    p.f_center_hz = spectral::bin_freq(peak, N, fs_hz);
    p.samples = band_to_time(spectrum, peak, K);

    // reference band (same width, +3 bandwidths away) for the noise power
    const std::size_t ref_c = static_cast<std::size_t>(
        (peak + static_cast<std::size_t>(std::lround(3.0 * bandwidth_hz / df))) % N);
    const auto ref = band_to_time(spectrum, ref_c, K);

    double ptot = 0.0, pref = 0.0;
    for (const auto& v : p.samples) ptot += std::norm(v);
    for (const auto& v : ref) pref += std::norm(v);
    ptot /= static_cast<double>(K);
    pref /= static_cast<double>(K);
    p.noise_power = pref;
    p.pilot_power = std::max(ptot - pref, 0.0);

    const double snr_db = 10.0 * std::log10(p.snr() + 1e-300);
    if (snr_db < min_snr_db)
        throw PilotNotFound("extract_pilot: pilot SNR " + std::to_string(snr_db) +
                            " dB below threshold");
    return p;
}

}  // namespace

Pilot extract_pilot(const cbuf& frame, double fs_hz, double f_expected_hz,
                    double bandwidth_hz, double search_halfwidth_hz, double min_snr_db) {
    cbuf spectrum = frame;
    fft::forward(spectrum);
    return extract_pilot_from_spectrum(spectrum, fs_hz, f_expected_hz, bandwidth_hz,
                                       search_halfwidth_hz, min_snr_db);
}

double estimate_freq_offset(std::span<const cplx> pilot, double fs_hz) {
    const std::size_t n = pilot.size();
    if (n < 16) throw UnwrapFailure("estimate_freq_offset: too few pilot samples");

    // accumulate increments arg(y[k+1] conj(y[k])); they are unwrapped by
    // construction as long as the residual offset stays below fs/2
    std::size_t big = 0;
    std::vector<double> phi(n);
    phi[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const cplx r = pilot[k] * std::conj(pilot[k - 1]);
        const double d = std::atan2(r.imag(), r.real());
        if (std::abs(d) > 0.9 * kPi) ++big;
        phi[k] = phi[k - 1] + d;
    }
    if (static_cast<double>(big) > 0.01 * static_cast<double>(n))
        throw UnwrapFailure("estimate_freq_offset: phase increments saturate (low SNR?)");

    // least squares slope with centered index
    const double nn = static_cast<double>(n);
    const double kbar = 0.5 * (nn - 1.0);
    double sxx = 0.0, sxy = 0.0, ybar = 0.0;
    for (std::size_t k = 0; k < n; ++k) ybar += phi[k];
    ybar /= nn;
    for (std::size_t k = 0; k < n; ++k) {
        const double x = static_cast<double>(k) - kbar;
        sxx += x * x;
        sxy += x * (phi[k] - ybar);
    }
    const double slope = sxy / sxx;  // rad per sample
    return slope * fs_hz / kTwoPi;
}

PhaseTrack ukf_phase_track(std::span<const cplx> pilot, double fs_pilot_hz,
                           const UkfConfig& cfg, double amplitude_hint) {
    cfg.validate();
    const std::size_t n = pilot.size();
    if (n == 0) throw PilotNotFound("ukf_phase_track: empty pilot");

    // amplitude and measurement noise from the stream itself unless given
    double amp = amplitude_hint;
    double r = cfg.measurement_noise_var;
    if (amp <= 0.0 || r <= 0.0) {
        double ptot = 0.0;
        for (const auto& v : pilot) ptot += std::norm(v);
        ptot /= static_cast<double>(n);
        if (r <= 0.0) r = ptot * 1e-2;  // fallback; harness always passes SNR-derived r
        if (amp <= 0.0) amp = std::sqrt(std::max(ptot - 2.0 * r, 0.25 * ptot));
    }

    const double q = cfg.process_noise_var;
    const double lam = cfg.alpha * cfg.alpha * (1.0 + cfg.kappa) - 1.0;
    const double wm0 = lam / (1.0 + lam);
    const double wc0 = wm0 + (1.0 - cfg.alpha * cfg.alpha + cfg.beta);
    const double wi = 0.5 / (1.0 + lam);

    PhaseTrack track;
    track.phase_trajectory.resize(n);
    track.fs_hz = fs_pilot_hz;
    track.decimation = 1;

    // init from the first samples
    cplx acc{0.0, 0.0};
    const std::size_t warm = std::min<std::size_t>(16, n);
    for (std::size_t k = 0; k < warm; ++k) acc += pilot[k];
    double theta = std::atan2(acc.imag(), acc.real());
    double P = cfg.init_phase_var;

    double nis_acc = 0.0;
    std::size_t nis_count = 0;
    std::size_t nis_strikes = 0;

    for (std::size_t k = 0; k < n; ++k) {
        // predict
        double Pp = P + q;

        // sigma points through h(theta) = amp (cos, sin)
        const double spread = std::sqrt((1.0 + lam) * Pp);
        const double x0 = theta, x1 = theta + spread, x2 = theta - spread;
        const double h0c = std::cos(x0), h0s = std::sin(x0);
        const double h1c = std::cos(x1), h1s = std::sin(x1);
        const double h2c = std::cos(x2), h2s = std::sin(x2);
        const double zc = amp * (wm0 * h0c + wi * (h1c + h2c));
        const double zs = amp * (wm0 * h0s + wi * (h1s + h2s));

        // innovation covariance S (2x2) and cross covariance Pxz (1x2)
        double s11 = r, s22 = r, s12 = 0.0;
        double px1 = 0.0, px2 = 0.0;
        {
            const double d0c = amp * h0c - zc, d0s = amp * h0s - zs;
            const double d1c = amp * h1c - zc, d1s = amp * h1s - zs;
            const double d2c = amp * h2c - zc, d2s = amp * h2s - zs;
            s11 += wc0 * d0c * d0c + wi * (d1c * d1c + d2c * d2c);
            s22 += wc0 * d0s * d0s + wi * (d1s * d1s + d2s * d2s);
            s12 += wc0 * d0c * d0s + wi * (d1c * d1s + d2c * d2s);
            px1 += wi * ((x1 - theta) * d1c + (x2 - theta) * d2c);
            px2 += wi * ((x1 - theta) * d1s + (x2 - theta) * d2s);
        }
        const double det = s11 * s22 - s12 * s12;
        const double i11 = s22 / det, i22 = s11 / det, i12 = -s12 / det;
        const double k1 = px1 * i11 + px2 * i12;
        const double k2 = px1 * i12 + px2 * i22;

        const double ic = pilot[k].real() - zc;
        const double is = pilot[k].imag() - zs;
        theta += k1 * ic + k2 * is;
        P = Pp - (k1 * (s11 * k1 + s12 * k2) + k2 * (s12 * k1 + s22 * k2));
        if (P < 1e-18) P = 1e-18;
        track.phase_trajectory[k] = theta;

        // windowed normalized innovation^2 divergence check
        nis_acc += 0.5 * (ic * (i11 * ic + i12 * is) + is * (i12 * ic + i22 * is));
        if (++nis_count == cfg.divergence_window) {
            const double nis = nis_acc / static_cast<double>(nis_count);
            nis_acc = 0.0;
            nis_count = 0;
            nis_strikes = (nis > cfg.divergence_threshold) ? nis_strikes + 1 : 0;
            if (nis_strikes >= 3)
                throw DivergenceDetected("ukf_phase_track: innovation variance above threshold");
        }
    }

    track.residual_phase_var = P;
    track.pilot_snr_hat_db = 10.0 * std::log10(amp * amp / (2.0 * r) + 1e-300);
    return track;
}

// ---------------------------------------------------------------------------

FrameProcessor::FrameProcessor(const TxConfig& tx, std::optional<Equalizer> eq,
                               UkfConfig ukf)
    : tx_(tx), eq_(std::move(eq)), ukf_(ukf) {
    tx_.validate();
    taps_ = txdsp::rrc_taps(tx_.rrc_rolloff, tx_.rrc_span_symbols, tx_.samples_per_symbol);
    if (eq_) eq_gains_ = eq_->gains(tx_.frame_len, tx_.dac_rate_hz);

    // Matched filter with folded-spectrum normalization: the truncated RRC
    // pair alone leaves ~1e-3 residual ISI, so the receive response is
    // G = sps conj(H) / sum_a |H(f + a fs/sps)|^2, making the end-to-end
    // symbol-spaced response exactly Nyquist.
    const std::size_t n = tx_.frame_len;
    const std::size_t sps = tx_.samples_per_symbol;
    const std::size_t nsym_bins = n / sps;
    cbuf h(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < taps_.size(); ++i) h[i] = cplx{taps_[i], 0.0};
    fft::forward(h);
    std::vector<double> folded(nsym_bins, 0.0);
    for (std::size_t k = 0; k < n; ++k) folded[k % nsym_bins] += std::norm(h[k]);
    mf_response_.resize(n);
    const double scale = static_cast<double>(sps);
    for (std::size_t k = 0; k < n; ++k)
        mf_response_[k] = scale * std::conj(h[k]) / folded[k % nsym_bins];
}

cbuf FrameProcessor::whiten_fft(const cbuf& frame) {
    cbuf spectrum = frame;
    fft::forward(spectrum);
    if (!eq_gains_.empty()) {
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(spectrum.size());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k)
            spectrum[static_cast<std::size_t>(k)] *= eq_gains_[static_cast<std::size_t>(k)];
    }
    return spectrum;
}

std::vector<cplx> FrameProcessor::demod_core(cbuf&& spectrum, double f_dc_hz,
                                             const PhaseTrack* track) {
    fft::inverse(spectrum);  // back to time domain, whitened
    std::span<cplx> buf(spectrum.data(), spectrum.size());
    kernels::rotate_tone(buf, -f_dc_hz / tx_.dac_rate_hz, 0.0);
    if (track && !track->phase_trajectory.empty()) {
        const std::size_t dec = track->decimation;
        if (dec == 1 && track->phase_trajectory.size() == buf.size()) {
            kernels::apply_phase(buf, track->phase_trajectory, -1.0);
        } else {
            kernels::apply_phase_interp(buf, track->phase_trajectory, dec, -1.0);
        }
    }
    // matched filter in the frequency domain, with a notch over the pilot
    // image at f_pilot - f_signal so the strong tone cannot leak through the
    // receive filter's stopband into the symbol band
    fft::forward(spectrum);
    {
        const std::size_t nn = spectrum.size();
        const double f_notch = tx_.f_pilot_hz - tx_.f_signal_hz;
        const double notch_half = 1.5e6;
        const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(nn);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < n; ++k) {
            const std::size_t ku = static_cast<std::size_t>(k);
            const double f = spectral::bin_freq(ku, nn, tx_.dac_rate_hz);
            spectrum[ku] *= (std::abs(f - f_notch) <= notch_half) ? cplx{0.0, 0.0}
                                                                  : mf_response_[ku];
        }
    }
    fft::inverse(spectrum);

    // the receive filter is zero-phase (conj(H) cancels the shaping delay),
    // so symbol i sits exactly at sample i * sps
    const std::size_t n_sym = tx_.symbols_per_frame();
    std::vector<cplx> syms(n_sym);
    kernels::downsample(std::span<const cplx>(spectrum.data(), spectrum.size()), 0,
                        tx_.samples_per_symbol, std::span<cplx>(syms));
    return syms;
}

std::vector<cplx> FrameProcessor::matched_downsample(const cbuf& baseband) {
    cbuf spectrum = baseband;
    fft::forward(spectrum);
    return demod_core(std::move(spectrum), 0.0, nullptr);
}

double FrameProcessor::symbol_variance(const cbuf& cal_frame, double f_dc_hz) {
    auto syms = demod_core(whiten_fft(cal_frame), f_dc_hz, nullptr);
    const std::size_t trim = tx_.edge_trim_symbols();
    const std::size_t count = syms.size() - 2 * trim;
    return kernels::single_moments(std::span<const cplx>(syms.data() + trim, count))
        .quad_variance();
}

DemodResult FrameProcessor::process(const cbuf& rx_frame, const SymbolBlock& tx_symbols,
                                    double f_pilot_expected_hz,
                                    const std::optional<SymbolCalibration>& sym_cal) {
    cbuf spectrum = whiten_fft(rx_frame);

    Pilot pilot = extract_pilot_from_spectrum(spectrum, tx_.dac_rate_hz,
                                              f_pilot_expected_hz, 1e6, 30e6, 10.0);
    const double resid_hz =
        estimate_freq_offset(std::span<const cplx>(pilot.samples), pilot.fs_dec_hz);
    const double freq_offset_net = pilot.f_center_hz + resid_hz - tx_.f_pilot_hz;

    // remove the fitted residual, then track the remaining phase
    kernels::rotate_tone(std::span<cplx>(pilot.samples.data(), pilot.samples.size()),
                         -resid_hz / pilot.fs_dec_hz, 0.0);
    UkfConfig ukf = ukf_;
    if (ukf.measurement_noise_var <= 0.0) ukf.measurement_noise_var = pilot.noise_power / 2.0;
    PhaseTrack track = ukf_phase_track(std::span<const cplx>(pilot.samples),
                                       pilot.fs_dec_hz, ukf, std::sqrt(pilot.pilot_power));
    track.freq_offset_hat_hz = freq_offset_net;
    track.decimation = static_cast<std::size_t>(
        std::lround(tx_.dac_rate_hz / pilot.fs_dec_hz));
    track.fs_hz = tx_.dac_rate_hz;
    track.pilot_snr_hat_db = 10.0 * std::log10(pilot.snr() + 1e-300);

    auto syms = demod_core(std::move(spectrum), tx_.f_signal_hz + freq_offset_net, &track);

    // pair against tx: trim edges, search a small lag window, 5-sigma contract
    const std::size_t trim = tx_.edge_trim_symbols();
    const std::size_t n_sym = syms.size();
    if (tx_symbols.tx.size() != n_sym)
        throw SyncFailure("demod: tx/rx frame symbol counts differ");
    const std::ptrdiff_t max_lag = 64;
    const std::size_t probe_len =
        std::min<std::size_t>(4096, n_sym - 2 * trim - 2 * static_cast<std::size_t>(max_lag));
    const std::size_t probe_start = (n_sym - probe_len) / 2;

    std::ptrdiff_t best_lag = 0;
    double best_score = -1.0;
    std::vector<double> scores;
    scores.reserve(2 * static_cast<std::size_t>(max_lag) + 1);
    for (std::ptrdiff_t lag = -max_lag; lag <= max_lag; ++lag) {
        cplx corr{0.0, 0.0};
        for (std::size_t i = probe_start; i < probe_start + probe_len; ++i)
            corr += syms[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + lag)] *
                    std::conj(tx_symbols.tx[i]);
        const double score = std::abs(corr);
        scores.push_back(score);
        if (score > best_score) {
            best_score = score;
            best_lag = lag;
        }
    }
    double side_mean = 0.0, side_sq = 0.0;
    std::size_t side_n = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        const std::ptrdiff_t lag = static_cast<std::ptrdiff_t>(j) - max_lag;
        if (std::abs(lag - best_lag) <= 2) continue;
        side_mean += scores[j];
        side_sq += scores[j] * scores[j];
        ++side_n;
    }
    side_mean /= static_cast<double>(side_n);
    const double side_std =
        std::sqrt(std::max(side_sq / static_cast<double>(side_n) - side_mean * side_mean, 0.0));
    if (!(best_score > 0.0) || !(side_std > 0.0) ||
        best_score < side_mean + 5.0 * side_std)
        throw SyncFailure("demod: correlation peak below 5 sigma of sidelobes");

    DemodResult out;
    out.block.frame_id = tx_symbols.frame_id;
    // keep i + lag inside the frame when |lag| exceeds the edge trim
    const std::ptrdiff_t ns = static_cast<std::ptrdiff_t>(n_sym);
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(trim),
                                                       -best_lag);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(ns - static_cast<std::ptrdiff_t>(trim),
                                                       ns - best_lag);
    if (hi <= lo) throw SyncFailure("demod: empty overlap after alignment");
    out.block.tx.assign(tx_symbols.tx.begin() + lo, tx_symbols.tx.begin() + hi);
    out.block.rx.resize(static_cast<std::size_t>(hi - lo));
    for (std::ptrdiff_t i = lo; i < hi; ++i)
        out.block.rx[static_cast<std::size_t>(i - lo)] =
            syms[static_cast<std::size_t>(i + best_lag)];

    // phase reference from the complex LS gain; magnitude kept for estimation
    const auto m = kernels::pair_moments(std::span<const cplx>(out.block.tx),
                                         std::span<const cplx>(out.block.rx));
    cplx g{0.0, 0.0};
    {
        cplx num{0.0, 0.0};
        for (std::size_t i = 0; i < out.block.tx.size(); ++i)
            num += out.block.rx[i] * std::conj(out.block.tx[i]);
        g = num / m.sum_aa;
    }
    const double rot = -std::atan2(g.imag(), g.real());
    kernels::rotate_tone(std::span<cplx>(out.block.rx.data(), out.block.rx.size()), 0.0,
                         rot / kTwoPi);

    if (sym_cal) {
        const double scale = 1.0 / std::sqrt(sym_cal->shot_variance);
        kernels::scale(std::span<cplx>(out.block.rx.data(), out.block.rx.size()), scale);
    }

    out.diag.frame_index = tx_symbols.frame_id;
    out.diag.freq_offset_hz = freq_offset_net;
    out.diag.pilot_snr_db = track.pilot_snr_hat_db;
    out.diag.residual_phase_var = track.residual_phase_var;
    out.diag.n_symbols = out.block.tx.size();
    out.diag.sync_lag = best_lag;
    out.diag.gain_mag = std::abs(g);
    out.diag.gain_phase = -rot;
    return out;
}

SymbolCalibration calibrate_symbol_units(FrameProcessor& proc,
                                         std::span<const cbuf> vacuum_frames,
                                         std::span<const cbuf> electronic_frames,
                                         double f_dc_hz) {
    if (vacuum_frames.empty() || electronic_frames.empty())
        throw DegenerateCalibration("calibrate_symbol_units: empty frame set");
    double vac = 0.0, el = 0.0;
    for (const auto& f : vacuum_frames) vac += proc.symbol_variance(f, f_dc_hz);
    for (const auto& f : electronic_frames) el += proc.symbol_variance(f, f_dc_hz);
    vac /= static_cast<double>(vacuum_frames.size());
    el /= static_cast<double>(electronic_frames.size());
    if (!(vac > el))
        throw DegenerateCalibration("calibrate_symbol_units: vacuum <= electronic at symbol level");
    SymbolCalibration sc;
    sc.shot_variance = vac - el;
    sc.v_el_sym = el / (vac - el);
    return sc;
}

}  // namespace rxdsp
}  // namespace cvqkd

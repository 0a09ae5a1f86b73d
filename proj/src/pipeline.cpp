#include "cvqkd/pipeline.hpp"

#include <cmath>

#include "cvqkd/io.hpp"
#include "cvqkd/spectral.hpp"
#include "json.hpp"

namespace cvqkd::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::string frame_name(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%04zu", prefix, i);
    return buf;
}

CalibrationRecord make_calibration(const Scenario& s) {
    // raw-level statistics; frames regenerated rather than stored
    spectral::WelchAccumulator vac_psd(1 << 14), el_psd(1 << 14);
    kernels::SingleMoments vac_m, el_m;
    for (std::size_t i = 0; i < s.cal_vacuum_frames; ++i) {
        const cbuf f = channel::vacuum_frame(s.channel, s.tx.frame_len, i);
        vac_psd.add_frame(std::span<const cplx>(f.data(), f.size()));
        vac_m += kernels::single_moments(std::span<const cplx>(f.data(), f.size()));
    }
    for (std::size_t i = 0; i < s.cal_electronic_frames; ++i) {
        const cbuf f = channel::electronic_frame(s.channel, s.tx.frame_len, i);
        el_psd.add_frame(std::span<const cplx>(f.data(), f.size()));
        el_m += kernels::single_moments(std::span<const cplx>(f.data(), f.size()));
    }
    CalibrationRecord cal;
    cal.vacuum_variance_raw = vac_m.quad_variance();
    cal.electronic_variance_raw = el_m.quad_variance();
    if (!(cal.vacuum_variance_raw > cal.electronic_variance_raw))
        throw DegenerateCalibration("calibration: vacuum variance <= electronic variance");
    cal.n_samples = vac_m.n + el_m.n;
    cal.fs_hz = s.channel.fs_hz;
    cal.psd_nfft = 1 << 14;
    cal.vacuum_psd = vac_psd.average();
    cal.electronic_psd = el_psd.average();
    return cal;
}

SymbolCalibration make_symbol_calibration(const Scenario& s, rxdsp::FrameProcessor& proc) {
    const double f_dc = s.tx.f_signal_hz + s.channel.params.delta_f_hz;
    double vac = 0.0, el = 0.0;
    for (std::size_t i = 0; i < s.cal_vacuum_frames; ++i)
        vac += proc.symbol_variance(channel::vacuum_frame(s.channel, s.tx.frame_len, i), f_dc);
    for (std::size_t i = 0; i < s.cal_electronic_frames; ++i)
        el += proc.symbol_variance(channel::electronic_frame(s.channel, s.tx.frame_len, i),
                                   f_dc);
    vac /= static_cast<double>(s.cal_vacuum_frames);
    el /= static_cast<double>(s.cal_electronic_frames);
    if (!(vac > el))
        throw DegenerateCalibration("symbol calibration: vacuum <= electronic");
    SymbolCalibration sc;
    sc.shot_variance = vac - el;
    sc.v_el_sym = el / (vac - el);
    return sc;
}

nlohmann::json report_to_json(const KeyRateReport& r) {
    nlohmann::json j;
    j["mode"] = r.mode == RateMode::finite ? "finite" : "asymptotic";
    j["i_ab_bits"] = r.i_ab;
    j["chi_e_bits"] = r.chi_e;
    j["delta_n_bits"] = r.delta_n;
    j["rate_asymptotic_bits_per_use"] = r.rate_asymptotic;
    j["rate_finite_bits_per_use"] = r.rate_finite;
    j["rate_clamped_zero"] = r.rate_clamped_zero;
    j["eta_wc"] = r.eta_wc;
    j["xi_wc_msnu"] = r.xi_wc * 1e3;
    j["beta"] = r.beta;
    j["fer"] = r.fer;
    j["n_blocksize"] = r.n_blocksize;
    j["n_pa"] = r.n_pa;
    j["symbol_rate_hz"] = r.symbol_rate_hz;
    j["skr_bps"] = r.skr_bps;
    j["skr_gross_bps"] = r.skr_gross_bps;
    return j;
}

}  // namespace

WaveformRun run_waveform_path(const Scenario& s) {
    s.validate();
    WaveformRun run;
    run.cal = make_calibration(s);
    Equalizer eq(run.cal);

    // the UKF runs on the 1 MHz pilot band decimated to 1 MS/s; the laser
    // random walk per pilot sample is the full-rate variance times the factor
    UkfConfig cfg = s.ukf;
    const double q_full = kTwoPi * s.channel.params.combined_linewidth_hz() / s.channel.fs_hz;
    cfg.process_noise_var = std::max(q_full * (s.channel.fs_hz / 1e6), 1e-16);
    rxdsp::FrameProcessor proc(s.tx, eq, cfg);
    run.sym_cal = make_symbol_calibration(s, proc);

    const double f_pilot_expected = s.tx.f_pilot_hz + s.channel.params.delta_f_hz;

    for (std::size_t i = 0; i < s.frames; ++i) {
        txdsp::TxFrame tx = txdsp::make_frame(s.tx, s.channel.params.v_mod, i, s.master_seed);
        const cbuf rx = channel::simulate_link(tx.waveform, s.channel, s.tx, i);
        auto res = proc.process(rx, tx.symbols, f_pilot_expected, run.sym_cal);
        run.diags.push_back(res.diag);
        ParamEstimate est = estimation::estimate_from_moments(
            kernels::pair_moments(std::span<const cplx>(res.block.tx),
                                  std::span<const cplx>(res.block.rx)),
            s.channel.params.tau, run.sym_cal.v_el_sym, s.channel.params.v_mod);
        run.per_frame.push_back(est);
    }

    kernels::PairMoments pooled;
    for (const auto& e : run.per_frame) pooled += e.moments;
    run.pooled = estimation::estimate_from_moments(pooled, s.channel.params.tau,
                                                   run.sym_cal.v_el_sym,
                                                   s.channel.params.v_mod);
    estimation::confidence_interval(run.pooled, s.eps.eps_pe, s.pe);
    run.series = estimation::cumulative_series(run.per_frame, s.eps.eps_pe, s.pe);
    return run;
}

RunResult run_scenario(const Scenario& s, const fs::path& out_dir, bool fast_only) {
    s.validate();
    fs::create_directories(out_dir);
    RunResult result;

    result.fast = security::key_rate(s.channel.params, s.beta, s.fer, s.n_blocksize, s.eps,
                                     RateMode::finite, s.pe, s.tx.symbol_rate_hz);
    result.fast_asymptotic =
        security::key_rate(s.channel.params, s.beta, s.fer, s.n_blocksize, s.eps,
                           RateMode::asymptotic, s.pe, s.tx.symbol_rate_hz);

    nlohmann::json keyrate;
    keyrate["schema"] = "cvqkd-keyrate/1";
    keyrate["scenario"] = s.name;
    keyrate["config_hash"] = io::hex64(s.config_hash());
    keyrate["master_seed"] = s.master_seed;
    keyrate["fast_path"] = report_to_json(result.fast);
    keyrate["fast_path_asymptotic"] = report_to_json(result.fast_asymptotic);

    if (!fast_only) {
        WaveformRun run = run_waveform_path(s);

        io::write_text(out_dir / "calibration.json", snu::serialize(run.cal));
        manifest_add(out_dir, s, out_dir / "calibration.json");

        io::CsvWriter diag(out_dir / "diagnostics.csv",
                           "frame_index,freq_offset_hz,pilot_snr_db,residual_phase_var_rad2,"
                           "n_symbols,sync_lag,gain_mag,gain_phase_rad");
        for (const auto& d : run.diags) {
            const double row[] = {static_cast<double>(d.frame_index), d.freq_offset_hz,
                                  d.pilot_snr_db, d.residual_phase_var,
                                  static_cast<double>(d.n_symbols),
                                  static_cast<double>(d.sync_lag), d.gain_mag,
                                  d.gain_phase};
            diag.row(row);
        }
        diag.close();
        manifest_add(out_dir, s, out_dir / "diagnostics.csv");

        io::CsvWriter series(out_dir / "series.csv",
                             "frame_index,accumulated_symbols,xi_hat_msnu,ci_low_msnu,"
                             "ci_high_msnu,classical_channels_flag");
        for (const auto& p : run.series) {
            const double row[] = {static_cast<double>(p.frame_index),
                                  static_cast<double>(p.accumulated_symbols),
                                  p.xi_hat * 1e3, p.ci_low * 1e3, p.ci_high * 1e3,
                                  s.cwdm_on ? 1.0 : 0.0};
            series.row(row);
        }
        series.close();
        manifest_add(out_dir, s, out_dir / "series.csv");

        nlohmann::json est;
        est["schema"] = "cvqkd-estimate/1";
        est["scenario"] = s.name;
        est["n_symbols"] = run.pooled.n_symbols;
        est["eta_hat"] = run.pooled.eta_hat;
        est["xi_hat_msnu"] = run.pooled.xi_hat * 1e3;
        est["eta_wc"] = run.pooled.eta_wc;
        est["xi_wc_msnu"] = run.pooled.xi_wc * 1e3;
        est["v_el_sym_msnu"] = run.sym_cal.v_el_sym * 1e3;
        est["shot_variance"] = run.sym_cal.shot_variance;
        est["epsilon_pe"] = run.pooled.epsilon_pe;
        io::write_text(out_dir / "estimate.json", est.dump(2) + "\n");
        manifest_add(out_dir, s, out_dir / "estimate.json");

        result.data = security::key_rate_from_estimate(run.pooled, s.beta, s.fer,
                                                       s.n_blocksize, s.eps, s.pe,
                                                       s.tx.symbol_rate_hz);
        keyrate["data_path"] = report_to_json(*result.data);
        result.waveform = std::move(run);
    }

    io::write_text(out_dir / "keyrate.json", keyrate.dump(2) + "\n");
    manifest_add(out_dir, s, out_dir / "keyrate.json");
    emit_report(out_dir);
    return result;
}

void stage_calibrate(const Scenario& s, const fs::path& out_dir) {
    s.validate();
    fs::create_directories(out_dir);
    const CalibrationRecord cal = make_calibration(s);
    io::write_text(out_dir / "calibration.json", snu::serialize(cal));
    manifest_add(out_dir, s, out_dir / "calibration.json");
}

void stage_simulate(const Scenario& s, const fs::path& out_dir) {
    s.validate();
    fs::create_directories(out_dir);
    if (!fs::exists(out_dir / "calibration.json")) stage_calibrate(s, out_dir);
    for (std::size_t i = 0; i < s.frames; ++i) {
        txdsp::TxFrame tx = txdsp::make_frame(s.tx, s.channel.params.v_mod, i, s.master_seed);
        const cbuf rx = channel::simulate_link(tx.waveform, s.channel, s.tx, i);
        io::WaveformMeta meta;
        meta.kind = "rx";
        meta.fs_hz = s.channel.fs_hz;
        meta.frame_id = i;
        meta.master_seed = s.master_seed;
        const fs::path base = out_dir / frame_name("rx", i);
        io::write_waveform(base, std::span<const cplx>(rx.data(), rx.size()), meta);
        manifest_add(out_dir, s, fs::path(base.string() + ".iq"));
    }
}

void stage_dsp(const Scenario& s, const fs::path& dir) {
    s.validate();
    const CalibrationRecord cal = snu::deserialize(io::read_text(dir / "calibration.json"));
    Equalizer eq(cal);
    UkfConfig cfg = s.ukf;
    const double q_full = kTwoPi * s.channel.params.combined_linewidth_hz() / s.channel.fs_hz;
    cfg.process_noise_var = std::max(q_full * (s.channel.fs_hz / 1e6), 1e-16);
    rxdsp::FrameProcessor proc(s.tx, eq, cfg);
    const SymbolCalibration sym_cal = make_symbol_calibration(s, proc);
    const double f_pilot_expected = s.tx.f_pilot_hz + s.channel.params.delta_f_hz;

    io::CsvWriter diag(dir / "diagnostics.csv",
                       "frame_index,freq_offset_hz,pilot_snr_db,residual_phase_var_rad2,"
                       "n_symbols,sync_lag,gain_mag,gain_phase_rad");
    for (std::size_t i = 0; i < s.frames; ++i) {
        const cbuf rx = io::read_waveform(dir / frame_name("rx", i));
        // tx symbols regenerate deterministically from the scenario seed
        txdsp::TxFrame txf;
        txf.symbols = txdsp::draw_symbols(s.tx.symbols_per_frame(), s.channel.params.v_mod,
                                          rng::frame_seed(s.master_seed, i));
        txf.symbols.frame_id = i;
        auto res = proc.process(rx, txf.symbols, f_pilot_expected, sym_cal);
        const double row[] = {static_cast<double>(res.diag.frame_index),
                              res.diag.freq_offset_hz, res.diag.pilot_snr_db,
                              res.diag.residual_phase_var,
                              static_cast<double>(res.diag.n_symbols),
                              static_cast<double>(res.diag.sync_lag), res.diag.gain_mag,
                              res.diag.gain_phase};
        diag.row(row);
        io::WaveformMeta meta;
        meta.kind = "symbols";
        meta.fs_hz = s.tx.symbol_rate_hz;
        meta.frame_id = i;
        meta.master_seed = s.master_seed;
        io::write_symbol_pairs(dir / frame_name("symbols", i),
                               std::span<const cplx>(res.block.tx),
                               std::span<const cplx>(res.block.rx), meta);
        manifest_add(dir, s, fs::path((dir / frame_name("symbols", i)).string() + ".iq"));
    }
    diag.close();
    manifest_add(dir, s, dir / "diagnostics.csv");

    nlohmann::json j;
    j["schema"] = "cvqkd-dsp/1";
    j["v_el_sym_msnu"] = sym_cal.v_el_sym * 1e3;
    j["shot_variance"] = sym_cal.shot_variance;
    io::write_text(dir / "dsp.json", j.dump(2) + "\n");
    manifest_add(dir, s, dir / "dsp.json");
}

void stage_estimate(const Scenario& s, const fs::path& dir) {
    s.validate();
    const auto dspj = nlohmann::json::parse(io::read_text(dir / "dsp.json"));
    const double v_el_sym = dspj.at("v_el_sym_msnu").get<double>() * 1e-3;

    std::vector<ParamEstimate> per_frame;
    for (std::size_t i = 0; i < s.frames; ++i) {
        std::vector<cplx> tx, rx;
        io::read_symbol_pairs(dir / frame_name("symbols", i), tx, rx);
        SymbolBlock b;
        b.tx = std::move(tx);
        b.rx = std::move(rx);
        b.frame_id = i;
        per_frame.push_back(estimation::estimate_params(b, s.channel.params.tau, v_el_sym,
                                                        s.channel.params.v_mod));
    }
    const auto series = estimation::cumulative_series(per_frame, s.eps.eps_pe, s.pe);
    io::CsvWriter out(dir / "series.csv",
                      "frame_index,accumulated_symbols,xi_hat_msnu,ci_low_msnu,ci_high_msnu,"
                      "classical_channels_flag");
    for (const auto& p : series) {
        const double row[] = {static_cast<double>(p.frame_index),
                              static_cast<double>(p.accumulated_symbols), p.xi_hat * 1e3,
                              p.ci_low * 1e3, p.ci_high * 1e3, s.cwdm_on ? 1.0 : 0.0};
        out.row(row);
    }
    out.close();
    manifest_add(dir, s, dir / "series.csv");

    kernels::PairMoments pooled;
    for (const auto& e : per_frame) pooled += e.moments;
    ParamEstimate est = estimation::estimate_from_moments(pooled, s.channel.params.tau,
                                                          v_el_sym, s.channel.params.v_mod);
    estimation::confidence_interval(est, s.eps.eps_pe, s.pe);
    nlohmann::json j;
    j["schema"] = "cvqkd-estimate/1";
    j["scenario"] = s.name;
    j["n_symbols"] = est.n_symbols;
    j["eta_hat"] = est.eta_hat;
    j["xi_hat_msnu"] = est.xi_hat * 1e3;
    j["eta_wc"] = est.eta_wc;
    j["xi_wc_msnu"] = est.xi_wc * 1e3;
    j["v_el_sym_msnu"] = v_el_sym * 1e3;
    j["epsilon_pe"] = est.epsilon_pe;
    j["tau"] = s.channel.params.tau;
    j["v_mod"] = s.channel.params.v_mod;
    io::write_text(dir / "estimate.json", j.dump(2) + "\n");
    manifest_add(dir, s, dir / "estimate.json");
}

void stage_keyrate(const Scenario& s, const fs::path& dir, bool use_estimate) {
    s.validate();
    fs::create_directories(dir);
    nlohmann::json keyrate;
    keyrate["schema"] = "cvqkd-keyrate/1";
    keyrate["scenario"] = s.name;
    keyrate["config_hash"] = io::hex64(s.config_hash());
    keyrate["master_seed"] = s.master_seed;
    keyrate["fast_path"] = report_to_json(
        security::key_rate(s.channel.params, s.beta, s.fer, s.n_blocksize, s.eps,
                           RateMode::finite, s.pe, s.tx.symbol_rate_hz));
    keyrate["fast_path_asymptotic"] = report_to_json(
        security::key_rate(s.channel.params, s.beta, s.fer, s.n_blocksize, s.eps,
                           RateMode::asymptotic, s.pe, s.tx.symbol_rate_hz));
    if (use_estimate) {
        const auto ej = nlohmann::json::parse(io::read_text(dir / "estimate.json"));
        ChannelParams p = s.channel.params;
        p.eta = ej.at("eta_hat").get<double>();
        p.xi = std::max(ej.at("xi_hat_msnu").get<double>() * 1e-3, 0.0);
        p.v_el = ej.at("v_el_sym_msnu").get<double>() * 1e-3;
        KeyRateReport r = security::key_rate(p, s.beta, s.fer, s.n_blocksize, s.eps,
                                             RateMode::finite, s.pe, s.tx.symbol_rate_hz);
        // worst case straight from the recorded interval
        ChannelParams wc = p;
        wc.eta = ej.at("eta_wc").get<double>();
        wc.xi = std::max(ej.at("xi_wc_msnu").get<double>() * 1e-3, 0.0);
        keyrate["data_path"] = report_to_json(r);
        keyrate["data_path"]["eta_wc"] = wc.eta;
        keyrate["data_path"]["xi_wc_msnu"] = wc.xi * 1e3;
    }
    io::write_text(dir / "keyrate.json", keyrate.dump(2) + "\n");
    manifest_add(dir, s, dir / "keyrate.json");
}

void run_loss_sweep(const Scenario& s, double lo_db, double hi_db, double step_db,
                    const fs::path& out_dir) {
    s.validate();
    fs::create_directories(out_dir);
    std::vector<double> grid;
    for (double l = lo_db; l <= hi_db + 1e-9; l += step_db) grid.push_back(l);
    const auto sweep = security::rate_vs_loss_sweep(s.channel.params, grid, s.beta, s.fer,
                                                    RateMode::finite, s.n_blocksize, s.eps,
                                                    s.pe);
    io::CsvWriter out(out_dir / "loss_sweep.csv",
                      "loss_db,eta,rate_asymptotic,rate_finite,positive_asymptotic,"
                      "positive_finite");
    for (const auto& p : sweep) {
        const double row[] = {p.loss_db,
                              p.eta,
                              p.rate_asymptotic,
                              p.rate_finite,
                              p.rate_asymptotic > 0.0 ? 1.0 : 0.0,
                              p.rate_finite > 0.0 ? 1.0 : 0.0};
        out.row(row);
    }
    out.close();
    manifest_add(out_dir, s, out_dir / "loss_sweep.csv");
}

void run_blocksize_grid(const Scenario& s, const fs::path& out_dir) {
    s.validate();
    fs::create_directories(out_dir);
    std::vector<double> n_grid;
    for (int k = 1; k <= 30; ++k) n_grid.push_back(1e9 * k);
    const std::vector<double> beta_grid = {0.95, 0.96, 0.97, 0.98, 0.99, 0.999, 1.0};
    const auto grid = security::blocksize_beta_grid(s.channel.params, n_grid, beta_grid,
                                                    s.eps, s.fer, s.pe);
    io::CsvWriter out(out_dir / "blocksize_grid.csv", "n_blocksize,beta,rate_finite");
    for (const auto& p : grid.points) {
        const double row[] = {p.n_blocksize, p.beta, p.rate};
        out.row(row);
    }
    out.close();
    manifest_add(out_dir, s, out_dir / "blocksize_grid.csv");

    io::CsvWriter mins(out_dir / "blocksize_min_n.csv", "beta,min_n_blocksize");
    for (std::size_t i = 0; i < grid.beta_grid.size(); ++i) {
        const double row[] = {grid.beta_grid[i], grid.min_n_per_beta[i]};
        mins.row(row);
    }
    mins.close();
    manifest_add(out_dir, s, out_dir / "blocksize_min_n.csv");
}

void manifest_add(const fs::path& dir, const Scenario& s, const fs::path& file) {
    const fs::path mpath = dir / "manifest.json";
    nlohmann::json m;
    if (fs::exists(mpath)) {
        m = nlohmann::json::parse(io::read_text(mpath));
    } else {
        m["schema"] = "cvqkd-manifest/1";
        m["scenario"] = s.name;
        m["config_hash"] = io::hex64(s.config_hash());
        m["master_seed"] = s.master_seed;
        m["config"] = nlohmann::json::parse(s.to_json());
        m["artifacts"] = nlohmann::json::array();
    }
    const std::string rel = fs::relative(file, dir).string();
    const std::string sum = io::hex64(io::fnv1a_file(file));
    for (auto& a : m["artifacts"]) {
        if (a["path"] == rel) {
            a["fnv1a"] = sum;
            io::write_text(mpath, m.dump(2) + "\n");
            return;
        }
    }
    m["artifacts"].push_back({{"path", rel}, {"fnv1a", sum}});
    io::write_text(mpath, m.dump(2) + "\n");
}

std::string emit_report(const fs::path& dir) {
    const fs::path mpath = dir / "manifest.json";
    if (!fs::exists(mpath)) throw MissingArtifact("emit_report: no manifest in " + dir.string());
    const auto m = nlohmann::json::parse(io::read_text(mpath));

    nlohmann::json summary;
    summary["schema"] = "cvqkd-summary/1";
    summary["scenario"] = m.value("scenario", "");
    summary["config_hash"] = m.value("config_hash", "");
    summary["master_seed"] = m.value("master_seed", std::uint64_t{0});
    summary["artifacts"] = nlohmann::json::array();
    for (const auto& a : m.at("artifacts")) {
        const fs::path f = dir / a.at("path").get<std::string>();
        if (!fs::exists(f))
            throw MissingArtifact("emit_report: missing artifact " + f.string());
        const std::string sum = io::hex64(io::fnv1a_file(f));
        if (sum != a.at("fnv1a").get<std::string>())
            throw MissingArtifact("emit_report: checksum mismatch for " + f.string());
        summary["artifacts"].push_back({{"path", a.at("path")}, {"fnv1a", sum}});
    }
    if (fs::exists(dir / "keyrate.json"))
        summary["keyrate"] = nlohmann::json::parse(io::read_text(dir / "keyrate.json"));
    if (fs::exists(dir / "estimate.json"))
        summary["estimate"] = nlohmann::json::parse(io::read_text(dir / "estimate.json"));
    const std::string text = summary.dump(2) + "\n";
    io::write_text(dir / "summary.json", text);
    return text;
}

}  // namespace cvqkd::pipeline

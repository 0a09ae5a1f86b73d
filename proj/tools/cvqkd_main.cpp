// Command-line driver: scenario execution, stage-wise runs, sweeps, reports.
// Exit codes: 0 success, 2 configuration error, 3 pipeline error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "cvqkd/io.hpp"
#include "cvqkd/pipeline.hpp"

namespace fs = std::filesystem;
using namespace cvqkd;

namespace {

struct CommonOpts {
    std::string scenario_file;
    std::string preset;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::optional<std::size_t> frames;
};

Scenario load_scenario(const CommonOpts& o) {
    Scenario s;
    if (!o.scenario_file.empty()) {
        s = Scenario::from_json(io::read_text(o.scenario_file));
    } else if (!o.preset.empty()) {
        s = Scenario::preset(o.preset);
    } else {
        throw ConfigError("no scenario given: use --scenario <file> or --preset <name>");
    }
    if (o.seed) {
        s.master_seed = *o.seed;
        s.channel.seed = *o.seed;
        s.tx.seed = *o.seed;
    }
    if (o.frames) s.frames = *o.frames;
    s.validate();
    return s;
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--scenario", o.scenario_file, "scenario JSON file");
    cmd->add_option("--preset", o.preset,
                    "bundled scenario (100km-off, 100km-on, "
                    "100km-on-bigblock, 120km-on, smoke)");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--seed", o.seed, "override master seed");
    cmd->add_option("--threads", o.threads, "OpenMP thread count (0 = default)");
    cmd->add_option("--frames", o.frames, "override data frame count");
}

void print_keyrate(const KeyRateReport& r, const char* label) {
    std::printf("%s: R_asym = %.6e bits/use", label, r.rate_asymptotic);
    if (r.mode == RateMode::finite)
        std::printf(", R_finite = %.6e bits/use (eta_wc %.6f, xi_wc %.4f mSNU)",
                    r.rate_finite, r.eta_wc, r.xi_wc * 1e3);
    std::printf(", skr %.1f bit/s net (%.1f gross)\n", r.skr_bps, r.skr_gross_bps);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LLO CV-QKD link simulator and security calculator"};
    app.require_subcommand(1);

    CommonOpts o;
    bool fast = false;
    bool use_estimate = false;
    double sweep_lo = 10.0, sweep_hi = 25.0, sweep_step = 0.25;
    std::string sweep_kind = "loss";
    std::string report_dir;

    auto* run = app.add_subcommand("run", "full pipeline for one scenario");
    add_common(run, o);
    run->add_flag("--fast", fast, "skip the waveform simulation (math-only path)");

    auto* cal = app.add_subcommand("calibrate", "generate the calibration record");
    add_common(cal, o);

    auto* sim = app.add_subcommand("simulate", "write received frames to disk");
    add_common(sim, o);

    auto* dsp = app.add_subcommand("dsp", "run receiver DSP on simulated frames");
    add_common(dsp, o);

    auto* est = app.add_subcommand("estimate", "parameter estimation from DSP symbols");
    add_common(est, o);

    auto* keyrate = app.add_subcommand("keyrate", "secret key rate report");
    add_common(keyrate, o);
    keyrate->add_flag("--from-estimate", use_estimate,
                      "use estimate.json from the output directory");

    auto* sweep = app.add_subcommand("sweep", "loss sweep or blocksize/beta grid");
    add_common(sweep, o);
    sweep->add_option("--kind", sweep_kind, "loss | grid")
        ->check(CLI::IsMember({"loss", "grid"}));
    sweep->add_option("--lo", sweep_lo, "loss sweep start, dB");
    sweep->add_option("--hi", sweep_hi, "loss sweep end, dB");
    sweep->add_option("--step", sweep_step, "loss sweep step, dB");

    auto* report = app.add_subcommand("report", "aggregate + verify artifacts");
    report->add_option("--in", report_dir, "directory with manifest.json")->required();

    auto* presets = app.add_subcommand("presets", "list bundled scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        apply_threads(o.threads);
        if (presets->parsed()) {
            for (const auto& n : Scenario::preset_names()) std::printf("%s\n", n.c_str());
            return 0;
        }
        if (report->parsed()) {
            pipeline::emit_report(report_dir);
            std::printf("summary written to %s/summary.json\n", report_dir.c_str());
            return 0;
        }

        const Scenario s = load_scenario(o);
        const fs::path out = o.out_dir;

        if (run->parsed()) {
            auto res = pipeline::run_scenario(s, out, fast);
            print_keyrate(res.fast, "fast path");
            if (res.data) print_keyrate(*res.data, "data path");
            if (res.waveform)
                std::printf("pooled estimate: eta_hat %.6f, xi_hat %.4f mSNU over %llu symbols\n",
                            res.waveform->pooled.eta_hat, res.waveform->pooled.xi_hat * 1e3,
                            static_cast<unsigned long long>(res.waveform->pooled.n_symbols));
        } else if (cal->parsed()) {
            pipeline::stage_calibrate(s, out);
        } else if (sim->parsed()) {
            pipeline::stage_simulate(s, out);
        } else if (dsp->parsed()) {
            pipeline::stage_dsp(s, out);
        } else if (est->parsed()) {
            pipeline::stage_estimate(s, out);
        } else if (keyrate->parsed()) {
            pipeline::stage_keyrate(s, out, use_estimate);
        } else if (sweep->parsed()) {
            if (sweep_kind == "loss")
                pipeline::run_loss_sweep(s, sweep_lo, sweep_hi, sweep_step, out);
            else
                pipeline::run_blocksize_grid(s, out);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "pipeline error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

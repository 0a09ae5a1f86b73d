#pragma once

#include <filesystem>
#include <optional>

#include "cvqkd/scenario.hpp"

namespace cvqkd::pipeline {

// In-memory result of the waveform path (calibrate -> simulate -> dsp ->
// estimate) for one scenario.
struct WaveformRun {
    CalibrationRecord cal;
    SymbolCalibration sym_cal;
    std::vector<FrameDiag> diags;
    std::vector<ParamEstimate> per_frame;
    ParamEstimate pooled;
    std::vector<SeriesPoint> series;
};

struct RunResult {
    KeyRateReport fast;                 // parameter-only path, finite-size mode
    KeyRateReport fast_asymptotic;      // parameter-only path, asymptotic mode
    std::optional<KeyRateReport> data;  // from the waveform-path pooled estimate
    std::optional<WaveformRun> waveform;
};

// Streaming waveform path; regenerates frames deterministically instead of
// holding them (a 1e7-sample frame is ~160 MB).
WaveformRun run_waveform_path(const Scenario& s);

// Full scenario execution with artifact emission; fast_only skips the
// waveform path. Artifacts: calibration.json, diagnostics.csv, series.csv,
// estimate.json, keyrate.json, manifest.json.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_dir,
                       bool fast_only);

// Stage-wise entry points used by the CLI subcommands.
void stage_calibrate(const Scenario& s, const std::filesystem::path& out_dir);
void stage_simulate(const Scenario& s, const std::filesystem::path& out_dir);
void stage_dsp(const Scenario& s, const std::filesystem::path& dir);
void stage_estimate(const Scenario& s, const std::filesystem::path& dir);
void stage_keyrate(const Scenario& s, const std::filesystem::path& dir,
                   bool use_estimate);

// Sweep drivers (parameter-only, loss-curve and feasibility-grid outputs).
void run_loss_sweep(const Scenario& s, double lo_db, double hi_db, double step_db,
                    const std::filesystem::path& out_dir);
void run_blocksize_grid(const Scenario& s, const std::filesystem::path& out_dir);

// Aggregates manifest-listed artifacts, verifying checksums; writes
// summary.json and returns its text.
std::string emit_report(const std::filesystem::path& dir);

// Registers a file in dir/manifest.json (creating it if needed).
void manifest_add(const std::filesystem::path& dir, const Scenario& s,
                  const std::filesystem::path& file);

}  // namespace cvqkd::pipeline

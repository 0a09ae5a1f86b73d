#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "cvqkd/errors.hpp"
#include "cvqkd/fft.hpp"
#include "cvqkd/kernels.hpp"

namespace cvqkd::io {

// Flat binary waveform: little-endian float64 interleaved I/Q, with a JSON
// sidecar (<name>.json next to <name>.iq) carrying rates and provenance.
struct WaveformMeta {
    std::string kind;  // "tx", "rx", "vacuum", "electronic", "symbols"
    double fs_hz = 1e9;
    std::uint64_t frame_id = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t n_samples = 0;
    int format_version = 1;
};

void write_waveform(const std::filesystem::path& base, std::span<const cplx> samples,
                    const WaveformMeta& meta);
cbuf read_waveform(const std::filesystem::path& base, WaveformMeta* meta = nullptr);

// Paired symbol blocks: n records of (tx_re, tx_im, rx_re, rx_im), f64 LE.
void write_symbol_pairs(const std::filesystem::path& base, std::span<const cplx> tx,
                        std::span<const cplx> rx, const WaveformMeta& meta);
void read_symbol_pairs(const std::filesystem::path& base, std::vector<cplx>& tx,
                       std::vector<cplx>& rx, WaveformMeta* meta = nullptr);

// Deterministic CSV writing: %.17g doubles, '\n' line ends.
class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, const std::string& header);
    void row(std::span<const double> values);
    void close();
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
};

std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// FNV-1a 64-bit, used for config hashes and artifact checksums.
std::uint64_t fnv1a(std::string_view data);
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string hex64(std::uint64_t v);

}  // namespace cvqkd::io

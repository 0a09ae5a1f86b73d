#include "cvqkd/io.hpp"

#include <cstdio>
#include <cstring>

#include "json.hpp"

namespace cvqkd::io {

namespace {

nlohmann::json meta_to_json(const WaveformMeta& m) {
    nlohmann::json j;
    j["schema"] = "cvqkd-waveform/1";
    j["kind"] = m.kind;
    j["fs_hz"] = m.fs_hz;
    j["frame_id"] = m.frame_id;
    j["master_seed"] = m.master_seed;
    j["n_samples"] = m.n_samples;
    j["format"] = "f64le-interleaved-iq";
    j["format_version"] = m.format_version;
    return j;
}

WaveformMeta meta_from_json(const nlohmann::json& j) {
    WaveformMeta m;
    m.kind = j.value("kind", "");
    m.fs_hz = j.value("fs_hz", 0.0);
    m.frame_id = j.value("frame_id", std::uint64_t{0});
    m.master_seed = j.value("master_seed", std::uint64_t{0});
    m.n_samples = j.value("n_samples", std::uint64_t{0});
    m.format_version = j.value("format_version", 1);
    return m;
}

void write_f64_block(std::ofstream& out, const double* data, std::size_t count) {
    out.write(reinterpret_cast<const char*>(data),
              static_cast<std::streamsize>(count * sizeof(double)));
}

}  // namespace

void write_waveform(const std::filesystem::path& base, std::span<const cplx> samples,
                    const WaveformMeta& meta) {
    std::filesystem::path iq = base;
    iq += ".iq";
    std::ofstream out(iq, std::ios::binary);
    if (!out) throw Error("write_waveform: cannot open " + iq.string());
    static_assert(sizeof(cplx) == 2 * sizeof(double));
    write_f64_block(out, reinterpret_cast<const double*>(samples.data()),
                    2 * samples.size());
    out.close();

    WaveformMeta m = meta;
    m.n_samples = samples.size();
    std::filesystem::path side = base;
    side += ".json";
    write_text(side, meta_to_json(m).dump(2) + "\n");
}

cbuf read_waveform(const std::filesystem::path& base, WaveformMeta* meta) {
    std::filesystem::path side = base;
    side += ".json";
    const auto j = nlohmann::json::parse(read_text(side));
    if (j.value("schema", "") != "cvqkd-waveform/1")
        throw MissingArtifact("read_waveform: bad sidecar schema in " + side.string());
    WaveformMeta m = meta_from_json(j);

    std::filesystem::path iq = base;
    iq += ".iq";
    std::ifstream in(iq, std::ios::binary);
    if (!in) throw MissingArtifact("read_waveform: cannot open " + iq.string());
    cbuf data(m.n_samples);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(m.n_samples * sizeof(cplx)));
    if (in.gcount() != static_cast<std::streamsize>(m.n_samples * sizeof(cplx)))
        throw MissingArtifact("read_waveform: truncated " + iq.string());
    if (meta) *meta = m;
    return data;
}

void write_symbol_pairs(const std::filesystem::path& base, std::span<const cplx> tx,
                        std::span<const cplx> rx, const WaveformMeta& meta) {
    if (tx.size() != rx.size()) throw Error("write_symbol_pairs: length mismatch");
    std::filesystem::path bin = base;
    bin += ".iq";
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw Error("write_symbol_pairs: cannot open " + bin.string());
    std::vector<double> rec(4);
    for (std::size_t i = 0; i < tx.size(); ++i) {
        rec[0] = tx[i].real();
        rec[1] = tx[i].imag();
        rec[2] = rx[i].real();
        rec[3] = rx[i].imag();
        write_f64_block(out, rec.data(), 4);
    }
    out.close();

    WaveformMeta m = meta;
    m.kind = "symbols";
    m.n_samples = tx.size();
    std::filesystem::path side = base;
    side += ".json";
    write_text(side, meta_to_json(m).dump(2) + "\n");
}

void read_symbol_pairs(const std::filesystem::path& base, std::vector<cplx>& tx,
                       std::vector<cplx>& rx, WaveformMeta* meta) {
    std::filesystem::path side = base;
    side += ".json";
    const auto j = nlohmann::json::parse(read_text(side));
    WaveformMeta m = meta_from_json(j);
    std::filesystem::path bin = base;
    bin += ".iq";
    std::ifstream in(bin, std::ios::binary);
    if (!in) throw MissingArtifact("read_symbol_pairs: cannot open " + bin.string());
    tx.resize(m.n_samples);
    rx.resize(m.n_samples);
    std::vector<double> rec(4);
    for (std::size_t i = 0; i < m.n_samples; ++i) {
        in.read(reinterpret_cast<char*>(rec.data()), 4 * sizeof(double));
        if (!in) throw MissingArtifact("read_symbol_pairs: truncated " + bin.string());
        tx[i] = {rec[0], rec[1]};
        rx[i] = {rec[2], rec[3]};
    }
    if (meta) *meta = m;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::string& header)
    : path_(path), out_(path) {
    if (!out_) throw Error("CsvWriter: cannot open " + path.string());
    out_ << header << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::row(std::span<const double> values) {
    std::string line;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) line += ',';
        line += format_double(values[i]);
    }
    out_ << line << "\n";
}

void CsvWriter::close() {
    out_.close();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_text: cannot open " + path.string());
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingArtifact("read_text: cannot open " + path.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    return fnv1a(read_text(path));
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace cvqkd::io

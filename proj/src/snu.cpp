#include "cvqkd/snu.hpp"

#include <cmath>
#include <sstream>

#include "cvqkd/kernels.hpp"
#include "cvqkd/spectral.hpp"
#include "json.hpp"

namespace cvqkd {

void ChannelParams::validate() const {
    auto bad = [](const std::string& field, double v) {
        throw ConfigError("ChannelParams." + field + " out of range (value " +
                          std::to_string(v) + ")");
    };
    if (!(v_mod > 0.0) || !std::isfinite(v_mod)) bad("v_mod", v_mod);
    if (!(eta > 0.0 && eta <= 1.0)) bad("eta", eta);
    if (!(xi >= 0.0) || !std::isfinite(xi)) bad("xi", xi);
    if (!(tau > 0.0 && tau <= 1.0)) bad("tau", tau);
    if (!(v_el >= 0.0) || !std::isfinite(v_el)) bad("v_el", v_el);
    if (!(linewidth_tx_hz >= 0.0)) bad("linewidth_tx_hz", linewidth_tx_hz);
    if (!(linewidth_rx_hz >= 0.0)) bad("linewidth_rx_hz", linewidth_rx_hz);
    if (!std::isfinite(delta_f_hz)) bad("delta_f_hz", delta_f_hz);
}

namespace snu {

namespace {

struct FrameStats {
    double variance = 0.0;
    std::uint64_t n = 0;
};

FrameStats averaged_variance(std::span<const std::vector<std::complex<double>>> frames) {
    kernels::SingleMoments total;
    for (const auto& f : frames)
        total += kernels::single_moments(std::span<const std::complex<double>>(f));
    FrameStats st;
    st.n = total.n;
    st.variance = total.quad_variance();
    return st;
}

std::vector<double> averaged_psd(std::span<const std::vector<std::complex<double>>> frames,
                                 std::size_t nfft) {
    spectral::WelchAccumulator acc(nfft);
    for (const auto& f : frames) acc.add_frame(std::span<const std::complex<double>>(f));
    return acc.average();
}

}  // namespace

CalibrationRecord calibrate(std::span<const std::vector<std::complex<double>>> vacuum_frames,
                            std::span<const std::vector<std::complex<double>>> electronic_frames,
                            double fs_hz, std::size_t psd_nfft) {
    if (vacuum_frames.empty() || electronic_frames.empty())
        throw DegenerateCalibration("calibrate: empty frame set");

    const FrameStats vac = averaged_variance(vacuum_frames);
    const FrameStats el = averaged_variance(electronic_frames);
    if (!std::isfinite(vac.variance) || !std::isfinite(el.variance))
        throw DegenerateCalibration("calibrate: non-finite variance");
    if (!(vac.variance > el.variance) || !(el.variance > 0.0))
        throw DegenerateCalibration(
            "calibrate: vacuum variance must exceed electronic variance "
            "(LO off or detector misconfigured?)");

    CalibrationRecord cal;
    cal.vacuum_variance_raw = vac.variance;
    cal.electronic_variance_raw = el.variance;
    cal.n_samples = vac.n + el.n;
    cal.psd_nfft = psd_nfft;
    cal.fs_hz = fs_hz;
    cal.vacuum_psd = averaged_psd(vacuum_frames, psd_nfft);
    cal.electronic_psd = averaged_psd(electronic_frames, psd_nfft);
    return cal;
}

double to_snu_scale(const CalibrationRecord& cal) {
    const double norm = cal.normalization();
    if (!(norm > 0.0))
        throw DegenerateCalibration("to_snu: non-positive normalization factor");
    return 1.0 / std::sqrt(norm);
}

void to_snu(std::span<std::complex<double>> raw, const CalibrationRecord& cal) {
    kernels::scale(raw, to_snu_scale(cal));
}

void from_snu(std::span<std::complex<double>> snu_samples, const CalibrationRecord& cal) {
    kernels::scale(snu_samples, 1.0 / to_snu_scale(cal));
}

double db_to_transmittance(double loss_db) {
    if (loss_db < 0.0 || !std::isfinite(loss_db))
        throw NegativeLoss("db_to_transmittance: loss must be >= 0 dB");
    return std::pow(10.0, -loss_db / 10.0);
}

double transmittance_to_db(double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw NegativeLoss("transmittance_to_db: eta must be in (0, 1]");
    return -10.0 * std::log10(eta);
}

double backpropagate_excess_noise(double xi_at_receiver, double tau) {
    if (!(tau > 0.0 && tau <= 1.0))
        throw DomainError("backpropagate_excess_noise: tau must be in (0, 1]");
    return xi_at_receiver / tau;
}

std::string serialize(const CalibrationRecord& cal) {
    nlohmann::json j;
    j["schema"] = "cvqkd-calibration/1";
    j["vacuum_variance_raw"] = cal.vacuum_variance_raw;
    j["electronic_variance_raw"] = cal.electronic_variance_raw;
    j["n_samples"] = cal.n_samples;
    j["psd_nfft"] = cal.psd_nfft;
    j["fs_hz"] = cal.fs_hz;
    j["vacuum_psd"] = cal.vacuum_psd;
    j["electronic_psd"] = cal.electronic_psd;
    return j.dump(2);
}

CalibrationRecord deserialize(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (j.value("schema", "") != "cvqkd-calibration/1")
        throw ConfigError("calibration record: unknown schema");
    CalibrationRecord cal;
    cal.vacuum_variance_raw = j.at("vacuum_variance_raw").get<double>();
    cal.electronic_variance_raw = j.at("electronic_variance_raw").get<double>();
    cal.n_samples = j.at("n_samples").get<std::uint64_t>();
    cal.psd_nfft = j.at("psd_nfft").get<std::size_t>();
    cal.fs_hz = j.at("fs_hz").get<double>();
    cal.vacuum_psd = j.at("vacuum_psd").get<std::vector<double>>();
    cal.electronic_psd = j.at("electronic_psd").get<std::vector<double>>();
    if (!(cal.normalization() > 0.0))
        throw DegenerateCalibration("calibration record: non-positive normalization");
    return cal;
}

}  // namespace snu
}  // namespace cvqkd

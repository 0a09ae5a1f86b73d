#include "cvqkd/scenario.hpp"

#include "cvqkd/io.hpp"
#include "json.hpp"

namespace cvqkd {

void Scenario::validate() const {
    tx.validate();
    channel.validate();
    ukf.validate();
    eps.validate();
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("Scenario.beta must be in [0, 1]");
    if (!(fer >= 0.0 && fer < 1.0)) throw ConfigError("Scenario.fer must be in [0, 1)");
    if (!(n_blocksize >= 1.0)) throw ConfigError("Scenario.n_blocksize must be >= 1");
    if (frames == 0) throw ConfigError("Scenario.frames must be positive");
    if (cal_vacuum_frames == 0 || cal_electronic_frames == 0)
        throw ConfigError("Scenario: calibration frame counts must be positive");
    if (!(pe.subset_fraction > 0.0 && pe.subset_fraction <= 1.0))
        throw ConfigError("Scenario.pe_block_fraction must be in (0, 1]");
}

std::string Scenario::to_json() const {
    nlohmann::json j;
    j["schema"] = "cvqkd-scenario/1";
    j["name"] = name;

    j["tx"]["symbol_rate_hz"] = tx.symbol_rate_hz;
    j["tx"]["dac_rate_hz"] = tx.dac_rate_hz;
    j["tx"]["samples_per_symbol"] = tx.samples_per_symbol;
    j["tx"]["rrc_rolloff"] = tx.rrc_rolloff;
    j["tx"]["rrc_span_symbols"] = tx.rrc_span_symbols;
    j["tx"]["f_signal_hz"] = tx.f_signal_hz;
    j["tx"]["f_pilot_hz"] = tx.f_pilot_hz;
    j["tx"]["pilot_amplitude"] = tx.pilot_amplitude;
    j["tx"]["frame_len"] = tx.frame_len;

    j["channel"]["vm_snu"] = channel.params.v_mod;
    j["channel"]["eta"] = channel.params.eta;
    j["channel"]["xi_msnu"] = channel.params.xi * 1e3;
    j["channel"]["tau"] = channel.params.tau;
    j["channel"]["vel_msnu"] = channel.params.v_el * 1e3;
    j["channel"]["linewidth_tx_hz"] = channel.params.linewidth_tx_hz;
    j["channel"]["linewidth_rx_hz"] = channel.params.linewidth_rx_hz;
    j["channel"]["delta_f_hz"] = channel.params.delta_f_hz;
    j["channel"]["raman_msnu"] = channel.raman_noise * 1e3;
    j["channel"]["detector_bw_hz"] = channel.detector_bw_hz;
    j["channel"]["adc_gain"] = channel.adc_gain;

    j["ukf"]["measurement_noise_var"] = ukf.measurement_noise_var;
    j["ukf"]["init_phase_var"] = ukf.init_phase_var;
    j["ukf"]["alpha"] = ukf.alpha;
    j["ukf"]["beta"] = ukf.beta;
    j["ukf"]["kappa"] = ukf.kappa;

    j["epsilon"]["pe"] = eps.eps_pe;
    j["epsilon"]["pa"] = eps.eps_pa;
    j["epsilon"]["bar"] = eps.eps_bar;
    j["epsilon"]["total"] = eps.eps_total;

    j["pe_block_fraction"] = pe.subset_fraction;
    j["pe_pool_quadratures"] = pe.pool_quadratures;

    j["beta"] = beta;
    j["fer"] = fer;
    j["n_blocksize"] = n_blocksize;
    j["frames"] = frames;
    j["cal_vacuum_frames"] = cal_vacuum_frames;
    j["cal_electronic_frames"] = cal_electronic_frames;
    j["master_seed"] = master_seed;
    j["cwdm_on"] = cwdm_on;
    return j.dump(2) + "\n";
}

Scenario Scenario::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (j.value("schema", "") != "cvqkd-scenario/1")
        throw ConfigError("scenario: unknown schema (want cvqkd-scenario/1)");

    Scenario s;
    s.name = j.value("name", "unnamed");
    const auto& t = j.at("tx");
    s.tx.symbol_rate_hz = t.value("symbol_rate_hz", s.tx.symbol_rate_hz);
    s.tx.dac_rate_hz = t.value("dac_rate_hz", s.tx.dac_rate_hz);
    s.tx.samples_per_symbol = t.value("samples_per_symbol", s.tx.samples_per_symbol);
    s.tx.rrc_rolloff = t.value("rrc_rolloff", s.tx.rrc_rolloff);
    s.tx.rrc_span_symbols = t.value("rrc_span_symbols", s.tx.rrc_span_symbols);
    s.tx.f_signal_hz = t.value("f_signal_hz", s.tx.f_signal_hz);
    s.tx.f_pilot_hz = t.value("f_pilot_hz", s.tx.f_pilot_hz);
    s.tx.pilot_amplitude = t.value("pilot_amplitude", s.tx.pilot_amplitude);
    s.tx.frame_len = t.value("frame_len", s.tx.frame_len);

    const auto& c = j.at("channel");
    s.channel.params.v_mod = c.value("vm_snu", s.channel.params.v_mod);
    s.channel.params.eta = c.value("eta", s.channel.params.eta);
    s.channel.params.xi = c.value("xi_msnu", s.channel.params.xi * 1e3) * 1e-3;
    s.channel.params.tau = c.value("tau", s.channel.params.tau);
    s.channel.params.v_el = c.value("vel_msnu", s.channel.params.v_el * 1e3) * 1e-3;
    s.channel.params.linewidth_tx_hz = c.value("linewidth_tx_hz", 100.0);
    s.channel.params.linewidth_rx_hz = c.value("linewidth_rx_hz", 100.0);
    s.channel.params.delta_f_hz = c.value("delta_f_hz", 0.0);
    s.channel.raman_noise = c.value("raman_msnu", 0.0) * 1e-3;
    s.channel.detector_bw_hz = c.value("detector_bw_hz", 250e6);
    s.channel.adc_gain = c.value("adc_gain", 6.5);
    s.channel.fs_hz = s.tx.dac_rate_hz;

    if (j.contains("ukf")) {
        const auto& u = j.at("ukf");
        s.ukf.measurement_noise_var = u.value("measurement_noise_var", 0.0);
        s.ukf.init_phase_var = u.value("init_phase_var", 0.5);
        s.ukf.alpha = u.value("alpha", 1.0);
        s.ukf.beta = u.value("beta", 2.0);
        s.ukf.kappa = u.value("kappa", 2.0);
    }
    if (j.contains("epsilon")) {
        const auto& e = j.at("epsilon");
        s.eps.eps_pe = e.value("pe", 1e-10);
        s.eps.eps_pa = e.value("pa", 1e-10);
        s.eps.eps_bar = e.value("bar", 1e-10);
        s.eps.eps_total = e.value("total", 3e-10);
    }
    s.pe.subset_fraction = j.value("pe_block_fraction", 0.5);
    s.pe.pool_quadratures = j.value("pe_pool_quadratures", false);

    s.beta = j.value("beta", 0.96);
    s.fer = j.value("fer", 0.0);
    s.n_blocksize = j.value("n_blocksize", 1e8);
    s.frames = j.value("frames", std::size_t{2});
    s.cal_vacuum_frames = j.value("cal_vacuum_frames", std::size_t{4});
    s.cal_electronic_frames = j.value("cal_electronic_frames", std::size_t{2});
    s.master_seed = j.value("master_seed", std::uint64_t{1});
    s.cwdm_on = j.value("cwdm_on", true);
    s.channel.seed = s.master_seed;
    s.tx.seed = s.master_seed;
    s.validate();
    return s;
}

std::uint64_t Scenario::config_hash() const {
    return io::fnv1a(to_json());
}

namespace {

Scenario reference_link_base() {
    Scenario s;
    s.tx.symbol_rate_hz = 125e6;
    s.tx.dac_rate_hz = 1e9;
    s.tx.samples_per_symbol = 8;
    s.tx.rrc_rolloff = 0.2;
    s.tx.rrc_span_symbols = 40;
    s.tx.f_signal_hz = 120e6;
    s.tx.f_pilot_hz = 220e6;
    s.tx.frame_len = 10'000'000;
    s.channel.params.tau = 0.685;
    s.channel.params.linewidth_tx_hz = 100.0;
    s.channel.params.linewidth_rx_hz = 100.0;
    // LO 240 MHz above the carrier folds the band to negative frequencies
    // inside the 250 MHz detector bandwidth
    s.channel.params.delta_f_hz = -240e6;
    s.channel.detector_bw_hz = 250e6;
    s.frames = 20;
    s.cal_vacuum_frames = 24;
    s.cal_electronic_frames = 8;
    s.master_seed = 20250809;
    return s;
}

}  // namespace

Scenario Scenario::preset(const std::string& name) {
    Scenario s = reference_link_base();
    s.name = name;
    if (name == "100km-off") {
        s.channel.params.v_mod = 9.41;
        s.channel.params.eta = 0.0180;
        s.channel.params.xi = 0.714e-3;
        s.channel.params.v_el = 19.62e-3;
        s.n_blocksize = 1e8;
        s.beta = 0.96;
        s.fer = 0.0;
        s.cwdm_on = false;
        s.master_seed = 20250810;  // independent run from the ON scenario
    } else if (name == "100km-on") {
        s.channel.params.v_mod = 9.41;
        s.channel.params.eta = 0.0184;
        s.channel.params.xi = 0.760e-3;
        s.channel.params.v_el = 19.25e-3;
        s.n_blocksize = 1e8;
        s.beta = 0.96;
        s.fer = 0.0;
        s.cwdm_on = true;
    } else if (name == "100km-on-bigblock") {
        s.channel.params.v_mod = 9.41;
        s.channel.params.eta = 0.0183;
        s.channel.params.xi = 0.712e-3;
        s.channel.params.v_el = 19.26e-3;
        s.n_blocksize = 1.6e9;
        s.beta = 0.974;
        s.fer = 0.0;
        s.cwdm_on = true;
        s.master_seed = 20250811;
    } else if (name == "120km-on") {
        s.channel.params.v_mod = 4.71;
        s.channel.params.eta = 0.0096;
        s.channel.params.xi = 0.444e-3;
        s.channel.params.v_el = 18.99e-3;
        s.n_blocksize = 1e8;
        s.beta = 0.9373;
        s.fer = 0.30;
        s.cwdm_on = true;
        s.master_seed = 20250812;
    } else if (name == "smoke") {
        s.channel.params.v_mod = 5.0;
        s.channel.params.eta = 0.05;
        s.channel.params.xi = 5e-3;
        s.channel.params.v_el = 19e-3;
        s.tx.frame_len = 2'000'000;
        s.frames = 2;
        s.cal_vacuum_frames = 3;
        s.cal_electronic_frames = 2;
        s.n_blocksize = 1e8;
        s.beta = 0.95;
        s.fer = 0.0;
        s.cwdm_on = true;
        s.master_seed = 7;
    } else {
        throw ConfigError("unknown scenario preset: " + name);
    }
    s.channel.seed = s.master_seed;
    s.tx.seed = s.master_seed;
    return s;
}

std::vector<std::string> Scenario::preset_names() {
    return {"100km-off", "100km-on", "100km-on-bigblock",
            "120km-on", "smoke"};
}

}  // namespace cvqkd

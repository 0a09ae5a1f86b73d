#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cvqkd/channel.hpp"
#include "cvqkd/rxdsp.hpp"
#include "cvqkd/security.hpp"

namespace cvqkd {

// A runnable bundle: transmitter, channel, receiver and security settings.
// Serialized as JSON with units in the field names; see docs/formats.md.
struct Scenario {
    std::string name = "unnamed";
    TxConfig tx;
    ChannelScenario channel;
    UkfConfig ukf;
    EpsilonBudget eps;
    PeConvention pe;
    double beta = 0.96;
    double fer = 0.0;
    double n_blocksize = 1e8;  // N for finite-size evaluation
    std::size_t frames = 2;    // data frames in the waveform path
    std::size_t cal_vacuum_frames = 4;
    std::size_t cal_electronic_frames = 2;
    std::uint64_t master_seed = 1;
    bool cwdm_on = true;

    void validate() const;
    std::string to_json() const;
    static Scenario from_json(const std::string& text);

    // configuration fingerprint recorded in every output
    std::uint64_t config_hash() const;

    // bundled scenarios: 100km-off, 100km-on, 100km-on-bigblock,
    // 120km-on, smoke
    static Scenario preset(const std::string& name);
    static std::vector<std::string> preset_names();
};

}  // namespace cvqkd

#pragma once

#include <stdexcept>
#include <string>

namespace cvqkd {

// Base for all pipeline errors; subcommands map these to exit code 3,
// config validation errors to exit code 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

// snu-core
struct DegenerateCalibration : Error {
    using Error::Error;
};
struct NegativeLoss : Error {
    using Error::Error;
};

// txdsp / channel-sim
struct AliasRisk : Error {
    using Error::Error;
};
struct SpectralOverlap : Error {
    using Error::Error;
};

// rxdsp
struct SingularPsd : Error {
    using Error::Error;
};
struct PilotNotFound : Error {
    using Error::Error;
};
struct UnwrapFailure : Error {
    using Error::Error;
};
struct DivergenceDetected : Error {
    using Error::Error;
};
struct SyncFailure : Error {
    using Error::Error;
};

// estimation
struct NegativeTransmittance : Error {
    using Error::Error;
};
struct InsufficientData : Error {
    using Error::Error;
};

// security
struct NumericalInstability : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};
struct NoPositiveRate : Error {
    using Error::Error;
};

// cli-harness
struct MissingArtifact : Error {
    using Error::Error;
};

}  // namespace cvqkd

#pragma once

#include <stdexcept>
#include <string>

namespace pwlab {

// Root of every failure this library raises on purpose. kind() is a stable
// machine-readable tag used by the CLI when embedding a failure in a report.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual const char* kind() const { return "error"; }
};

#define PWLAB_ERROR_TYPE(Name, tag)                                       \
    struct Name : Error {                                                 \
        using Error::Error;                                               \
        const char* kind() const override { return tag; }                 \
    }

// Invalid user-facing parameters (flags, config file, constructor arguments).
PWLAB_ERROR_TYPE(ConfigError, "config-invalid");
// Grid does not extend far enough for the requested state.
PWLAB_ERROR_TYPE(DomainTooSmallError, "domain-too-small");
// Eigenbasis captures too little of a state's norm to propagate it.
PWLAB_ERROR_TYPE(TruncationError, "truncation-inadequate");
// Amplitude under the node floor: the guidance velocity is not trustworthy.
PWLAB_ERROR_TYPE(NearNodeError, "near-node");
// Evaluation point left the region where the operation is defined.
PWLAB_ERROR_TYPE(OutOfDomainError, "out-of-domain");
// Adaptive step control collapsed below the representable step size.
PWLAB_ERROR_TYPE(StepUnderflowError, "step-underflow");
// Measurement-chain operation applied at the wrong stage.
PWLAB_ERROR_TYPE(WrongStageError, "wrong-stage");
// State was required to be normalized and is not.
PWLAB_ERROR_TYPE(NotNormalizedError, "not-normalized");
// Configuration outside the paraxial validity window.
PWLAB_ERROR_TYPE(ParaxialError, "paraxial-violation");
// File could not be read or written.
PWLAB_ERROR_TYPE(IoError, "io-failure");

#undef PWLAB_ERROR_TYPE

// Pair trajectory left the paraxial window; carries the exit time.
struct WindowExitError : Error {
    WindowExitError(const std::string& msg, double t) : Error(msg), exit_time(t) {}
    const char* kind() const override { return "window-exit"; }
    double exit_time;
};

} // namespace pwlab

#pragma once

#include <stdexcept>
#include <string>

namespace jointorbit {

/// Bad input: malformed spec documents, arity mismatches, unknown fixture
/// names, wrong point counts. CLI exit code 2.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested backend cannot serve the input (e.g. exact rank of a float
/// matrix, --exact on a non-polynomial spec). CLI exit code 2.
struct BackendError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical or internal-consistency failure: all sampling trials failed,
/// stabilization cap breached, a re-verification did not hold. CLI exit 3.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A flow trajectory left the admissible chart; carries the step index.
struct FlowError : std::runtime_error {
    long step;
    FlowError(const std::string& msg, long step_index)
        : std::runtime_error(msg + " (step " + std::to_string(step_index) + ")"),
          step(step_index) {}
};

} // namespace jointorbit

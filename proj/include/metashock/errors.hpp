#pragma once

#include <stdexcept>
#include <string>

namespace metashock {

// All failures surface as typed exceptions; what() carries the context
// (offending field, side, time stamp) the contract requires.

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StiffnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidFluxError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateJumpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutOfDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PartialSpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StructureViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedParameterError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailConstantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InstabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StepRejectedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowUpError : std::runtime_error {
  double time;
  BlowUpError(const std::string& msg, double t) : std::runtime_error(msg), time(t) {}
};

struct TrackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TransversalityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace metashock

#pragma once

#include <stdexcept>
#include <string>

namespace linlab {

// Invalid configuration or usage (bad flag combo, mismatched vector lengths).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// The adversary issued an illegal decision (advancing a returned process,
// responding to an unknown op, ...). Carries the decision index.
struct SimFault : std::runtime_error {
  SimFault(std::size_t decision_index, const std::string& what)
      : std::runtime_error("decision #" + std::to_string(decision_index) + ": " + what),
        index(decision_index) {}
  std::size_t index;
};

// A register consistency monitor rejected a decision. This is always a bug in
// the adversary (or in the monitor itself), never silently accepted.
struct MonitorViolation : std::runtime_error {
  explicit MonitorViolation(const std::string& what) : std::runtime_error(what) {}
};

// A trace is malformed or internally inconsistent.
struct TraceError : std::runtime_error {
  explicit TraceError(const std::string& what) : std::runtime_error(what) {}
};

// Replay diverged from the recorded history.
struct ReplayFault : std::runtime_error {
  ReplayFault(std::size_t event_index, const std::string& what)
      : std::runtime_error("replay diverged at event " + std::to_string(event_index) + ": " + what),
        index(event_index) {}
  std::size_t index;
};

}  // namespace linlab

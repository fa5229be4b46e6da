#pragma once

#include <stdexcept>
#include <string>

namespace porenet {

// Error taxonomy shared by the library and the CLI (which maps each class
// to a distinct exit code).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BoundsError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violation of an internal contract that valid pipelines cannot produce.
struct InvariantError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace porenet

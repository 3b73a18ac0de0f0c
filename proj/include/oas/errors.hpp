#pragma once

#include <stdexcept>
#include <string>

namespace oas {

// Parameter or state outside its documented domain.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A computation would exceed a configured enumeration/truncation cap.
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The slice sampler needed more components than its hard cap allows.
struct slice_overflow_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A prior was passed to an operation that does not support it.
struct unsupported_prior_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed experiment configuration.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input data file.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An internal invariant of a sampler state was violated.
struct invariant_error : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace oas

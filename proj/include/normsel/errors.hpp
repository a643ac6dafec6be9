// Error types shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace normsel {

// Malformed textual input (bit strings, generator specs, measure ids, config).
class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File-level problems: missing files, bad headers, truncated payloads.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Contract violations: length mismatches, out-of-range parameters.
class domain_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input has probability zero under the measure at hand.
class off_support_error : public domain_error {
 public:
  using domain_error::domain_error;
};

// Decoder state became inconsistent (code word does not describe any source).
class decode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration fails validation or a scenario hypothesis.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace normsel

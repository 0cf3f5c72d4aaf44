#pragma once

#include <stdexcept>
#include <string>

namespace polisim {

// Bad configuration or input tables. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exogenous series shorter than the requested horizon.
struct HorizonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ledger drift or a broken state invariant. Maps to CLI exit code 3.
struct IntegrityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Comparing ledger snapshots that do not describe the same run.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace polisim

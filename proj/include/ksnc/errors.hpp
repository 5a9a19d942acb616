#pragma once

#include <stdexcept>
#include <string>

namespace ksnc {

/// Base class for all library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed user input: ray-set files, expression text, bad indices, bad option values.
struct InputError : Error {
  using Error::Error;
};

/// Raised by operations that need ray vectors when the set was loaded in
/// adjacency-only form (orthogonality graph without coordinates).
struct VectorsRequiredError : Error {
  VectorsRequiredError()
      : Error("ray vectors required: this ray set provides only its orthogonality graph") {}
  explicit VectorsRequiredError(const std::string& what) : Error(what) {}
};

}  // namespace ksnc

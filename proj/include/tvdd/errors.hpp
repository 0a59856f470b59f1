#pragma once

#include <stdexcept>
#include <string>

namespace tvdd {

/// Base class of all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two fields with incompatible domain or channel shape were combined.
struct ShapeMismatch : Error {
  using Error::Error;
};

/// A pointwise B^{-1} application was requested for a forward operator
/// that couples distant lattice points; such problems must go through
/// the surrogate iteration instead.
struct GlobalOperatorRequiresSurrogate : Error {
  using Error::Error;
};

/// beta = 0 combined with a rank-deficient forward operator: B = T*T + beta*I
/// is singular and the dual functional is not coercive.
struct NotCoercive : Error {
  using Error::Error;
};

/// A 1-D tiling with the requested overlap does not exist (needs a_i >= 2r).
struct OverlapTooLarge : Error {
  using Error::Error;
};

/// Relaxation step outside the admissible range of the chosen mode.
struct SigmaOutOfRange : Error {
  using Error::Error;
};

/// Surrogate stepsize tau must exceed ||B^{-1}||.
struct TauTooSmall : Error {
  using Error::Error;
};

/// File I/O failure (image or CSV).
struct IoError : Error {
  using Error::Error;
};

/// Recognized file, but an unsupported variant (e.g. color PNG input).
struct UnsupportedFormat : IoError {
  using IoError::IoError;
};

}  // namespace tvdd

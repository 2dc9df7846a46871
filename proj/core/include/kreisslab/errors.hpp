#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace kreisslab {

/// Invalid argument values (non-finite entries, parameters out of range).
class input_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition of an operation does not hold for this input.
class precondition_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// zI - A (or a factor of a product formula) is numerically singular.
class singularity_error : public std::runtime_error {
public:
  singularity_error(const std::string& what, std::complex<double> where)
      : std::runtime_error(what), point(where) {}
  std::complex<double> point;
};

/// Requested object exceeds the configured dense-materialization limits.
class resource_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Result not representable in double precision (overflow / divergent sum).
class range_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A quadrature required to be finite failed to converge under refinement.
class admissibility_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace kreisslab

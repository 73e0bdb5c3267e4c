#pragma once

#include <stdexcept>
#include <string>

namespace nchardy {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NotInvertible : public Error {
 public:
  NotInvertible(const std::string& what, double sigmaMin) : Error(what), sigmaMin(sigmaMin) {}
  double sigmaMin;
};

class InadmissiblePoint : public Error {
 public:
  InadmissiblePoint(const std::string& what, double rowNorm) : Error(what), rowNorm(rowNorm) {}
  double rowNorm;
};

// Query outside the degree window on which a truncated operator is exact.
class WindowError : public Error {
 public:
  using Error::Error;
};

// A computation finished but could not certify its result.
class Diagnostic : public Error {
 public:
  using Error::Error;
};

}  // namespace nchardy

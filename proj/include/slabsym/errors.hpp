#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slabsym {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class StencilUnavailable : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class UnsupportedProfile : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class OrientationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class NoSolutionInBracket : public Error {
 public:
  using Error::Error;
};

class TopologyChange : public Error {
 public:
  using Error::Error;
};

class IncompatibleFlux : public Error {
 public:
  using Error::Error;
};

/// Newton (or continuation) gave up; carries the residual history.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, std::vector<double> history)
      : Error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

}  // namespace slabsym

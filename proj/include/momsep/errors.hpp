#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace momsep {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class IndexError : public Error {
public:
  using Error::Error;
};

class DegenerateStateError : public Error {
public:
  using Error::Error;
};

class InvalidStateError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class InvalidMapError : public Error {
public:
  using Error::Error;
};

/// Thrown when a coherent-state truncation loses more norm than allowed.
class InsufficientCutoffError : public Error {
public:
  InsufficientCutoffError(std::size_t mode, int cutoff, int required, double deficit);

  std::size_t mode() const { return mode_; }
  int cutoff() const { return cutoff_; }
  int required_cutoff() const { return required_; }
  double deficit() const { return deficit_; }

private:
  std::size_t mode_;
  int cutoff_;
  int required_;
  double deficit_;
};

/// A reconstruction needed moments that the table does not provide.
class MissingMomentError : public Error {
public:
  explicit MissingMomentError(std::vector<std::string> missing);

  const std::vector<std::string>& missing() const { return missing_; }

private:
  std::vector<std::string> missing_;
};

class DivergenceError : public Error {
public:
  using Error::Error;
};

class InconsistentMomentsError : public Error {
public:
  using Error::Error;
};

}  // namespace momsep

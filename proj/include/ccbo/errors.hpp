#pragma once

#include <stdexcept>
#include <string>

namespace ccbo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inconsistent dimensions between a model and its inputs.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A parameter outside its admissible domain (negative variance, angle outside [-pi, pi], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Conditioning data that cannot define a noise-free interpolant (exact duplicates, NaN).
class DataError : public Error {
 public:
  using Error::Error;
};

// Cholesky failure after the jitter schedule is exhausted.
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccbo

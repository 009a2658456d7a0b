#pragma once

#include <stdexcept>
#include <string>

namespace isaid {

// Malformed or insufficient input data: bad encodings, corrupt corpora or
// model files, infeasible splits. Precondition violations on configuration
// (hyperparameters, option combinations) use std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DecodeError : public DataError {
 public:
  using DataError::DataError;
};

class ModelFormatError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace isaid

#pragma once

#include <stdexcept>
#include <string>

namespace cssl {

// Root of the library's error hierarchy. Two broad families matter to callers:
// ConfigError (bad user configuration, CLI exit code 2) and DataError (bad or
// degenerate data, CLI exit code 3). Numeric failures during fitting are data
// induced and live under DataError as well.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct UnknownPreset : ConfigError {
  explicit UnknownPreset(const std::string& name)
      : ConfigError("unknown preset: " + name) {}
};

struct DataError : Error {
  using Error::Error;
};

struct MissingColumn : DataError {
  explicit MissingColumn(const std::string& name)
      : DataError("missing column: " + name), column(name) {}
  std::string column;
};

struct NonNumericCell : DataError {
  NonNumericCell(long row_, const std::string& col_)
      : DataError("non-numeric cell at data row " + std::to_string(row_) +
                  ", column " + col_),
        row(row_),
        column(col_) {}
  long row;
  std::string column;
};

struct TargetNotBinary : DataError {
  using DataError::DataError;
};

struct EmptyFile : DataError {
  using DataError::DataError;
};

struct TooFewRows : DataError {
  using DataError::DataError;
};

struct SingleClassAfterRetries : DataError {
  using DataError::DataError;
};

struct SingleClassLabels : DataError {
  using DataError::DataError;
};

// Numeric preconditions violated by the supplied values.
struct NumericError : DataError {
  using DataError::DataError;
};

struct SingularSystem : NumericError {
  using NumericError::NumericError;
};

struct NonFiniteInput : NumericError {
  using NumericError::NumericError;
};

struct NoPositiveWeights : NumericError {
  using NumericError::NumericError;
};

struct DimensionMismatch : NumericError {
  using NumericError::NumericError;
};

}  // namespace cssl

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dslasso {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Argument or configuration violates a documented precondition.
struct InvalidArgument : Error {
  using Error::Error;
};

/// X^T X is numerically singular (smallest eigenvalue <= 1e-10 * largest).
struct SingularDesign : Error {
  using Error::Error;
};

/// A computation failed numerically (factorization breakdown, cross-check mismatch).
struct NumericFailure : Error {
  using Error::Error;
};

/// y == 0 makes the default lambda grid collapse to all zeros.
struct DegenerateResponse : Error {
  using Error::Error;
};

/// Inverse chi-square moment requested below its finiteness threshold.
struct DivergentMoment : Error {
  using Error::Error;
};

/// Stein-type members need q >= 3 so the shrink constant is positive.
struct QTooSmall : Error {
  using Error::Error;
};

struct EmptyFile : Error {
  using Error::Error;
};

struct MissingColumn : Error {
  explicit MissingColumn(const std::string& column)
      : Error("missing column: " + column), column(column) {}
  std::string column;
};

struct NonNumericCell : Error {
  NonNumericCell(std::size_t row, const std::string& column, const std::string& cell)
      : Error("non-numeric cell at row " + std::to_string(row) + ", column " + column +
              ": \"" + cell + "\""),
        row(row),
        column(column) {}
  std::size_t row;  // 1-based data row (header excluded)
  std::string column;
};

}  // namespace dslasso

#ifndef ENSAVG_ERRORS_HPP
#define ENSAVG_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ensavg {

// Base class for every data or validation failure raised by the library.
// The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Series lengths or time axes disagree.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

// A member reproduces the observations exactly, so angles against it are
// undefined.
class PerfectModelError : public Error {
 public:
  PerfectModelError(std::size_t index, const std::string& name)
      : Error("model '" + name + "' (index " + std::to_string(index) +
              ") has zero residual; cosines are undefined and that model "
              "alone is optimal"),
        index_(index),
        name_(name) {}

  std::size_t index() const { return index_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t index_;
  std::string name_;
};

class NeedsTwoModelsError : public Error {
 public:
  explicit NeedsTwoModelsError(std::size_t m)
      : Error("at least two models are required, got " + std::to_string(m)) {}
};

// Observation mean-square is zero, so screening ratios are undefined.
class ZeroNormError : public Error {
 public:
  ZeroNormError()
      : Error("observations have zero mean-square; screening ratio is "
              "undefined") {}
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  // row and column are 1-based positions in the input text.
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : Error("row " + std::to_string(row) + ", column " +
              std::to_string(column) + ": " + what),
        row_(row),
        column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

}  // namespace ensavg

#endif  // ENSAVG_ERRORS_HPP

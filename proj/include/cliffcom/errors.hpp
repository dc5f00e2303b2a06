#pragma once

#include <stdexcept>
#include <string>

namespace cliffcom {

struct ShapeMismatch : std::runtime_error {
  explicit ShapeMismatch(const std::string &what) : std::runtime_error("ShapeMismatch: " + what) {}
};

struct SingularMatrix : std::runtime_error {
  explicit SingularMatrix(const std::string &what) : std::runtime_error("SingularMatrix: " + what) {}
};

struct BadShape : std::runtime_error {
  explicit BadShape(const std::string &what) : std::runtime_error("BadShape: " + what) {}
};

struct OddColumn : std::runtime_error {
  explicit OddColumn(const std::string &what) : std::runtime_error("OddColumn: " + what) {}
};

struct IndexOutOfRange : std::runtime_error {
  explicit IndexOutOfRange(const std::string &what) : std::runtime_error("IndexOutOfRange: " + what) {}
};

struct Infeasible : std::runtime_error {
  explicit Infeasible(const std::string &what) : std::runtime_error("Infeasible: " + what) {}
};

struct TooLarge : std::runtime_error {
  explicit TooLarge(const std::string &what) : std::runtime_error("TooLarge: " + what) {}
};

struct UnsupportedK : std::runtime_error {
  explicit UnsupportedK(const std::string &what) : std::runtime_error("UnsupportedK: " + what) {}
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string &what) : std::runtime_error("ParseError: " + what) {}
};

}  // namespace cliffcom

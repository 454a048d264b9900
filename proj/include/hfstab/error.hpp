#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace hfstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid model definition, unknown model id, bad parameters, or a model
/// whose dispersion relation is not real-valued ("model-not-dispersive").
class ModelError : public Error {
public:
  using Error::Error;
};

/// Invalid run configuration (schema violation, mismatched inputs).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// The requested computation has no implementation for this model kind.
class UnsupportedModel : public Error {
public:
  using Error::Error;
};

/// Argument outside the domain of a special function (e.g. elliptic modulus κ ≥ 1).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Malformed dispersion-relation expression.
class ParseError : public Error {
public:
  ParseError(std::size_t offset, std::string expected, std::string excerpt)
      : Error(format(offset, expected, excerpt)), offset_(offset),
        expected_(std::move(expected)), excerpt_(std::move(excerpt)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& excerpt() const noexcept { return excerpt_; }

private:
  static std::string format(std::size_t offset, const std::string& expected,
                            const std::string& excerpt) {
    return "parse error at offset " + std::to_string(offset) + ": expected " +
           expected + " near '" + excerpt + "'";
  }

  std::size_t offset_;
  std::string expected_;
  std::string excerpt_;
};

/// Failure while evaluating a parsed expression.
class EvalError : public Error {
public:
  enum class Kind { unbound_variable, domain, non_finite };

  EvalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

/// Failure of a numerical procedure (Newton, bracketing, eigen-analysis).
class NumericalError : public Error {
public:
  enum class Kind {
    no_convergence,
    resonance,
    eigenvector_not_found,
    eigensolver_failure,
    no_collision_found,
  };

  NumericalError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

} // namespace hfstab

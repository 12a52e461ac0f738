#pragma once

#include <stdexcept>
#include <string>

namespace lambq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter failed validation; field() names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Coupling strength g >= 1: the Hamiltonian is no longer positive definite.
class InstabilityError : public Error {
 public:
  explicit InstabilityError(double g)
      : Error("Hamiltonian no longer positive-definite: g = " + std::to_string(g) +
              " >= 1"),
        g_(g) {}
  double g() const noexcept { return g_; }

 private:
  double g_;
};

/// A bracket expected to hold exactly one root had no sign change.
class RootNotFoundError : public Error {
 public:
  RootNotFoundError(int bracket, const std::string& what)
      : Error("root not found in bracket " + std::to_string(bracket) + ": " + what),
        bracket_(bracket) {}
  int bracket() const noexcept { return bracket_; }

 private:
  int bracket_;
};

class PoleProximityError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class ResonanceNotFoundError : public Error {
 public:
  using Error::Error;
};

/// A numerical identity that must hold did not; invariant() names it.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, const std::string& what)
      : Error(invariant + ": " + what), invariant_(std::move(invariant)) {}
  const std::string& invariant() const noexcept { return invariant_; }

 private:
  std::string invariant_;
};

}  // namespace lambq

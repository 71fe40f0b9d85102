#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lorentzw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse failure. Carries the byte offset of the offending token and the
/// token classes that would have been accepted there.
struct SyntaxError : Error {
  std::size_t offset;
  std::vector<std::string> expected;
  SyntaxError(std::string msg, std::size_t off, std::vector<std::string> exp)
      : Error(std::move(msg)), offset(off), expected(std::move(exp)) {}
};

/// Identifier that is neither `t` nor a known function name.
struct UnknownIdentifier : Error {
  std::size_t offset;
  std::string name;
  UnknownIdentifier(std::string msg, std::size_t off, std::string id)
      : Error(std::move(msg)), offset(off), name(std::move(id)) {}
};

/// Evaluation left the mathematical domain (ln of a non-positive value,
/// division by zero, sqrt of a negative, the abs/sign kink, overflow, ...).
struct DomainError : Error {
  std::string subexpr;
  double arg;
  DomainError(std::string msg, std::string sub, double a)
      : Error(std::move(msg)), subexpr(std::move(sub)), arg(a) {}
};

struct QuadratureError : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };
struct SingularPointError : Error { using Error::Error; };
struct DegenerateNormalError : Error { using Error::Error; };
struct RankError : Error { using Error::Error; };
struct NotCanonicalError : Error { using Error::Error; };
struct NegativeProductError : Error { using Error::Error; };
struct StiffnessError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };
struct MaskError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace lorentzw

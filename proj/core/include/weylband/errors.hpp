#pragma once

#include <stdexcept>
#include <string>

namespace weylband {

// Base for all recoverable domain failures. The CLI maps these to exit
// status 1; configuration and usage problems use ConfigError (status 2).
class DomainError : public std::runtime_error {
public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class UnknownFamily : public DomainError {
public:
  using DomainError::DomainError;
};

class ParamOutOfRange : public DomainError {
public:
  using DomainError::DomainError;
};

class UnknownObservable : public DomainError {
public:
  using DomainError::DomainError;
};

class QuadratureFailure : public DomainError {
public:
  using DomainError::DomainError;
};

class DegenerateTorus : public DomainError {
public:
  using DomainError::DomainError;
};

class StepFailure : public DomainError {
public:
  using DomainError::DomainError;
};

class UndecidedRationality : public DomainError {
public:
  using DomainError::DomainError;
};

// Transversality of the level crossing failed: the observable average
// grazes a counting level instead of crossing it.
class TangentCrossing : public DomainError {
public:
  TangentCrossing(const std::string& msg, double a_at) : DomainError(msg), a(a_at) {}
  double a;
};

// A counting level coincides with the accumulation set of a leaf other
// than the boundary tori (equator, meridian family, or a rational band).
class LevelHitsSingularLeaf : public DomainError {
public:
  LevelHitsSingularLeaf(const std::string& msg, double level_val)
      : DomainError(msg), level(level_val) {}
  double level;
};

class RootBracketFailure : public DomainError {
public:
  using DomainError::DomainError;
};

class NonSeparableObservable : public DomainError {
public:
  using DomainError::DomainError;
};

class ConvergenceFailure : public DomainError {
public:
  using DomainError::DomainError;
};

class IOFailure : public DomainError {
public:
  using DomainError::DomainError;
};

// Bad config files, unknown flags, schema violations. Exit status 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace weylband

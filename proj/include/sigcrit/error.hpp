#pragma once

#include <stdexcept>
#include <string>

namespace sigcrit {

/// Broad failure classes; each maps onto one CLI exit code.
enum class ErrorKind {
  config,   // bad user input or configuration
  numeric,  // range, pole, aliasing, planning and other numerical failures
  io,       // filesystem problems
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string category, const std::string& what)
      : std::runtime_error(what), kind_(kind), category_(std::move(category)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short machine-readable tag, e.g. "pole" or "aliasing".
  const std::string& category() const noexcept { return category_; }

 private:
  ErrorKind kind_;
  std::string category_;
};

#define SIGCRIT_DEFINE_ERROR(Name, Kind, Tag)                          \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(Kind, Tag, what) {} \
  };

SIGCRIT_DEFINE_ERROR(ConfigError, ErrorKind::config, "config")
SIGCRIT_DEFINE_ERROR(DomainError, ErrorKind::config, "domain")
SIGCRIT_DEFINE_ERROR(RangeError, ErrorKind::numeric, "range")
SIGCRIT_DEFINE_ERROR(PoleError, ErrorKind::numeric, "pole")
SIGCRIT_DEFINE_ERROR(BracketError, ErrorKind::numeric, "bracket")
SIGCRIT_DEFINE_ERROR(PlanningError, ErrorKind::numeric, "planning")
SIGCRIT_DEFINE_ERROR(AliasingError, ErrorKind::numeric, "aliasing")
SIGCRIT_DEFINE_ERROR(SymmetryError, ErrorKind::numeric, "symmetry")
SIGCRIT_DEFINE_ERROR(ConventionError, ErrorKind::numeric, "convention")
SIGCRIT_DEFINE_ERROR(LandscapeError, ErrorKind::numeric, "landscape")
SIGCRIT_DEFINE_ERROR(IoError, ErrorKind::io, "io")

#undef SIGCRIT_DEFINE_ERROR

}  // namespace sigcrit

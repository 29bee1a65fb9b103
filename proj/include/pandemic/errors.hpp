#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pandemic {

/// A parameter failed its range or ordering constraint. `field()` names the
/// offending member so callers (the scenario reader) can point at the key.
class InvalidParameter : public std::invalid_argument {
 public:
  InvalidParameter(std::string field, const std::string& constraint)
      : std::invalid_argument(field + ": " + constraint),
        field_(std::move(field)),
        constraint_(constraint) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string field_;
  std::string constraint_;
};

/// A computation was asked for outside the region where it is defined,
/// e.g. the meeting objective with zero infection risk.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pandemic

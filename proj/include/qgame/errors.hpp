#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

/// Violation of a structural invariant in a game description (K mismatch,
/// bad payoff shape, ...). Carries the offending field path for diagnostics.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string field_path, const std::string& message)
      : std::runtime_error(field_path + ": " + message),
        field_path_(std::move(field_path)) {}

  const std::string& field_path() const { return field_path_; }

 private:
  std::string field_path_;
};

}  // namespace qgame

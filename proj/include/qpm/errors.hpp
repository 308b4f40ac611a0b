#pragma once

#include <stdexcept>
#include <string>

namespace qpm {

/// Raised when an evaluation falls outside a model's domain of validity
/// (frequency outside the dispersion window, z outside the crystal, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid user-supplied parameters. `field()` names the offending key so the
/// CLI can report it in a machine-parsable way.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace qpm

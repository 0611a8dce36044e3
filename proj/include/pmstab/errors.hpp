#pragma once

#include <stdexcept>
#include <string>

namespace pmstab {

// Invalid physical constant, geometry, or config field. Carries the field
// name so the CLI can point at the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A numerical routine failed (eigensolver breakdown, singular solve, rank
// deficiency). Carries the module/mode context.
class NumericalError : public std::runtime_error {
public:
    NumericalError(std::string context, const std::string& message)
        : std::runtime_error(context + ": " + message), context_(std::move(context)) {}

    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

// Caller misuse of an API (mismatched layouts, wrong boundary, missing
// coefficient).
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& message) : std::logic_error(message) {}
};

} // namespace pmstab

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace diffsearch {

enum class ErrorKind {
    // parameter validation
    MissingField,
    NonFinite,
    NonPositiveMu,
    NegativeRate,
    NegativeDistance,
    NegativeDiffusion,
    InvalidRace,
    InvalidProfile,
    InvalidArgument,
    // numerics
    Overflow,
    NoConvergence,
    DegenerateCurtailment,
    InversionUnstable,
    DensityVanishes,
    ObjectUnreachableByB,
    IllConditioned,
    NoMinimumInBracket,
    TimeCapExceeded,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Validation errors map to CLI exit code 2, everything else to 1.
bool is_config_error(ErrorKind kind) noexcept;

class SearchError : public std::runtime_error {
public:
    SearchError(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace diffsearch

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fcagenda {

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Whole-string decimal parse; nullopt for anything else, including inf/nan.
std::optional<double> parse_double(std::string_view text);

}  // namespace fcagenda

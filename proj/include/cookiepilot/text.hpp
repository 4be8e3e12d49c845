#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cookiepilot::text {

// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split_tokens(std::string_view s);
std::string truncate_tokens(std::string_view normalized, std::size_t max_tokens);
// Truncates to at most `max_chars` bytes without splitting a UTF-8 sequence.
std::string truncate_chars(std::string_view s, std::size_t max_chars);

// Lowercase words: alphanumerics and apostrophes, everything else splits.
std::vector<std::string> words(std::string_view s);

}  // namespace cookiepilot::text

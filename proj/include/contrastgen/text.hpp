#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace contrastgen::text {

// ASCII lowercase. Non-ASCII bytes pass through untouched.
std::string lower(std::string_view s);

// Lowercase, trim, and collapse internal runs of whitespace to one space.
std::string normalize(std::string_view s);
// True when normalize(s) == s.
bool is_normalized(std::string_view s);

std::string_view trim(std::string_view s);

// Whitespace-separated tokens; a trailing '?' is split off as its own token.
std::vector<std::string> tokenize(std::string_view s);

bool iequals(std::string_view a, std::string_view b);
bool istarts_with(std::string_view s, std::string_view prefix);
bool iends_with(std::string_view s, std::string_view suffix);

}  // namespace contrastgen::text

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tdm::text {

/// Collapses runs of ASCII whitespace to one space and trims both ends.
std::string normalize_whitespace(std::string_view input);

/// Unicode NFC. Invalid UTF-8 sequences are replaced with U+FFFD.
std::string nfc(std::string_view utf8);

/// Full Unicode case folding.
std::string case_fold(std::string_view utf8);

/// Tokens are maximal runs of non-whitespace bytes. The views alias `input`.
std::vector<std::string_view> tokenize(std::string_view input);

std::size_t token_count(std::string_view input);

std::string join(const std::vector<std::string_view>& parts, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool is_space(char c) noexcept;

std::string ascii_lower(std::string_view input);

}  // namespace tdm::text

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace atlas::unicode {

struct CodePoint {
  char32_t value;
  std::size_t byte_offset;
  std::size_t byte_length;
};

/// Decodes UTF-8. Throws Error(SchemaError) on ill-formed input.
std::vector<CodePoint> decode(std::string_view utf8);

bool is_valid_utf8(std::string_view utf8) noexcept;
std::size_t length(std::string_view utf8);

/// NFC form of a UTF-8 string.
std::string nfc(std::string_view utf8);
bool is_nfc(std::string_view utf8);

bool is_whitespace(char32_t c) noexcept;
/// General category P* (connector, dash, open/close, quotes, other).
bool is_punctuation(char32_t c) noexcept;
/// Apostrophes and elision marks that stay attached to a word.
bool is_elision_mark(char32_t c) noexcept;

/// Trims Unicode whitespace and collapses inner runs to a single U+0020.
std::string collapse_whitespace(std::string_view utf8);

}  // namespace atlas::unicode

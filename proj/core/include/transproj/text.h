#pragma once

// UTF-8 helpers shared by the corpus reader, the placeholder scanner and the
// target-side tokenizer.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace transproj {

// One decoded code point and its byte extent in the source string.
struct CodePoint {
  char32_t value = 0;
  std::size_t offset = 0;  // byte offset of the first unit
  std::size_t length = 0;  // number of UTF-8 code units
};

bool is_valid_utf8(std::string_view text);

// Decodes |text| into code points. Invalid sequences decode as U+FFFD
// covering a single byte, so the result always tiles the input.
std::vector<CodePoint> decode_utf8(std::string_view text);

void append_utf8(std::string& out, char32_t cp);

// Unicode White_Space property.
bool is_unicode_whitespace(char32_t cp);

// Value of a decimal digit in ASCII, Arabic-Indic (U+0660..U+0669) or
// Extended Arabic-Indic (U+06F0..U+06F9); nullopt for anything else.
std::optional<int> decimal_digit_value(char32_t cp);

// Splits on runs of Unicode whitespace; never yields empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

std::string_view trim_whitespace(std::string_view text);

bool contains_whitespace(std::string_view text);

std::string join(const std::vector<std::string>& pieces, std::string_view sep);

// Number of code points, used for column alignment.
std::size_t display_width(std::string_view text);

}  // namespace transproj

#pragma once

// Small string helpers shared by the parsers and the TSV readers/writers.

#include <string>
#include <string_view>
#include <vector>

namespace glossfill::text {

/// Split on every occurrence of `sep`; keeps empty fields.
std::vector<std::string> split(std::string_view s, char sep);

/// Split on runs of ASCII spaces; never yields empty tokens.
std::vector<std::string> split_words(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim_ascii(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool ends_with(std::string_view s, std::string_view suffix);

/// Split a document into lines. A trailing newline does not produce an extra
/// empty line; `\r` is left untouched.
std::vector<std::string> lines(std::string_view s);

/// UTF-8 <-> UTF-32 (code points). Invalid sequences become U+FFFD.
std::u32string to_u32(std::string_view utf8);
std::string to_utf8(std::u32string_view u32);

/// Unicode NFC normalisation followed by trimming of leading/trailing white
/// space.
std::string nfc_trim(std::string_view utf8);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

} // namespace glossfill::text

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// Small UTF-8 and string helpers shared by every module.
namespace gramlex::text {

/// True when `s` is well-formed UTF-8 (no overlongs, no surrogates).
bool is_valid_utf8(std::string_view s);

/// Decodes well-formed UTF-8 into code points. Invalid bytes throw EncodingError.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

/// Simple case folding: ASCII, Latin-1, Greek and Cyrillic capitals are
/// lowered; every other code point passes through.
char32_t fold_case(char32_t c);
std::string fold_case(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

/// 64-bit FNV-1a. Stable across platforms; used for split assignment and
/// config digests.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);

/// Lowercase ASCII slug: runs of non-alphanumerics collapse to one '-'.
std::string slugify(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace gramlex::text

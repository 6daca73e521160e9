#ifndef DISANA_TEXT_HPP
#define DISANA_TEXT_HPP

#include <cstdint>
#include <string>
#include <string_view>

namespace disana::text {

/// Decodes one UTF-8 sequence starting at `pos`; invalid bytes decode to
/// U+FFFD and consume a single byte. Returns the codepoint and advances pos.
char32_t decode_utf8(std::string_view s, std::size_t& pos);

void encode_utf8(char32_t cp, std::string& out);

/// Simple lowercase mapping: ASCII, Latin-1 supplement, Latin Extended-A,
/// Greek and Cyrillic base ranges. Everything else passes through.
char32_t lower_codepoint(char32_t cp);

/// True for codepoints we treat as word constituents (letters, digits,
/// combining marks). Punctuation, symbols and whitespace split tokens.
bool is_word_codepoint(char32_t cp);

std::string to_lower(std::string_view s);

} // namespace disana::text

#endif

#ifndef MMCRF_UTF8_HPP
#define MMCRF_UTF8_HPP

#include <string>
#include <string_view>

namespace mmcrf::utf8 {

// Decodes UTF-8 bytes into codepoints. Rejects truncated sequences,
// overlong encodings, surrogates, and values above U+10FFFF with a
// DecodeError naming the byte offset.
std::u32string decode(std::string_view bytes);

std::string encode(char32_t cp);
std::string encode(std::u32string_view cps);

// Unicode whitespace (word separators in corpus files).
bool is_space(char32_t cp);

}  // namespace mmcrf::utf8

#endif  // MMCRF_UTF8_HPP

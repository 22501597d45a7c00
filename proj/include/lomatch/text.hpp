#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lomatch {

/// Lowercase (ASCII) tokens split on anything that is not an ASCII
/// alphanumeric byte. Bytes >= 0x80 are kept inside tokens so UTF-8 words
/// survive untouched.
std::vector<std::string> tokenize(std::string_view text);

/// Decode UTF-8 into code points; each malformed byte decodes to itself so
/// the mapping is total and deterministic.
std::vector<std::uint32_t> decode_utf8(std::string_view text);

std::string to_lower_ascii(std::string_view text);

}  // namespace lomatch

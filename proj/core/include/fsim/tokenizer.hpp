#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fsim {

/// Canonical tokenizer shared by documents and queries: ASCII-lowercase, split
/// on every character that is not an ASCII letter or digit, drop empty tokens.
/// Bytes >= 0x80 are kept as token characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace fsim

#pragma once

#include <string>
#include <string_view>

namespace mg {

/// First 16 hex digits of the SHA-256 of `bytes`.
std::string content_hash(std::string_view bytes);

/// Content hash after normalizing line endings (CRLF and lone CR become LF).
std::string normalized_content_hash(std::string_view bytes);

}  // namespace mg

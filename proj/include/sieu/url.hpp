#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sieu {

/// Lowercases scheme and host, drops default ports, fragments and a
/// trailing slash. Strings that do not parse as URLs come back trimmed.
std::string normalize_url(std::string_view url);

/// Lowercased URL pieces split at / . - _ and other delimiters.
std::vector<std::string> url_tokens(std::string_view url);

/// Percent-encodes everything outside the unreserved set.
std::string url_encode(std::string_view text);

}  // namespace sieu

#include "sieu/url.hpp"

#include <cctype>

#include "sieu/text_analysis.hpp"

namespace sieu {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_scheme(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.') {
      return false;
    }
  }
  return true;
}

}  // namespace

std::string normalize_url(std::string_view url) {
  const std::string trimmed = trim(url);
  auto sep = trimmed.find("://");
  if (sep == std::string::npos) return trimmed;
  std::string scheme = to_lower(std::string_view(trimmed).substr(0, sep));
  if (!valid_scheme(scheme)) return trimmed;

  std::string_view rest = std::string_view(trimmed).substr(sep + 3);
  if (auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
  auto path_start = rest.find_first_of("/?");
  std::string_view authority = rest.substr(0, path_start);
  std::string_view path = path_start == std::string_view::npos ? std::string_view{}
                                                                : rest.substr(path_start);
  if (authority.empty() || authority.find(' ') != std::string_view::npos) return trimmed;

  std::string userinfo;
  if (auto at = authority.rfind('@'); at != std::string_view::npos) {
    userinfo = std::string(authority.substr(0, at + 1));
    authority = authority.substr(at + 1);
  }
  std::string host = to_lower(authority);
  if (auto colon = host.rfind(':'); colon != std::string::npos && host.find(']') == std::string::npos) {
    auto port = host.substr(colon + 1);
    if ((scheme == "http" && port == "80") || (scheme == "https" && port == "443") ||
        port.empty()) {
      host.erase(colon);
    }
  }

  std::string query;
  if (auto q = path.find('?'); q != std::string_view::npos) {
    query = std::string(path.substr(q));
    path = path.substr(0, q);
  }
  std::string p(path);
  while (!p.empty() && p.back() == '/') p.pop_back();
  return scheme + "://" + userinfo + host + p + query;
}

std::vector<std::string> url_tokens(std::string_view url) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : url) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || u >= 0x80) {
      cur.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string url_encode(std::string_view text) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(c);
    } else {
      out.push_back('%');
      out.push_back(kHex[u >> 4]);
      out.push_back(kHex[u & 0xF]);
    }
  }
  return out;
}

}  // namespace sieu

#include "sieu/html.hpp"

#include <cctype>
#include <cstdint>
#include <optional>

#include "sieu/text_analysis.hpp"

namespace sieu {

namespace {

std::string collapse_ws(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF) return;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct Tag {
  std::string name;  // lowercased, "/x" for closing tags
  std::size_t begin = 0;
  std::size_t end = 0;  // one past '>'
  std::string_view attributes;
};

// Next tag at or after `from`; nullopt when no complete tag remains.
std::optional<Tag> next_tag(std::string_view html, std::size_t from) {
  while (true) {
    auto lt = html.find('<', from);
    if (lt == std::string_view::npos) return std::nullopt;
    if (html.substr(lt, 4) == "<!--") {
      auto close = html.find("-->", lt + 4);
      if (close == std::string_view::npos) return std::nullopt;
      from = close + 3;
      continue;
    }
    auto gt = html.find('>', lt + 1);
    if (gt == std::string_view::npos) return std::nullopt;
    Tag t;
    t.begin = lt;
    t.end = gt + 1;
    std::size_t i = lt + 1;
    if (i < gt && html[i] == '/') {
      t.name.push_back('/');
      ++i;
    }
    while (i < gt && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '!')) {
      t.name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(html[i]))));
      ++i;
    }
    t.attributes = html.substr(i, gt - i);
    return t;
  }
}

// name=value pairs; values may be double-, single- or un-quoted.
std::vector<std::pair<std::string, std::string>> parse_attributes(std::string_view s) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == '/')) ++i;
  };
  while (true) {
    skip();
    if (i >= s.size()) break;
    std::string name;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '=' &&
           s[i] != '/') {
      name.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(s[i]))));
      ++i;
    }
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::string value;
    if (i < s.size() && s[i] == '=') {
      ++i;
      while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && (s[i] == '"' || s[i] == '\'')) {
        char q = s[i++];
        auto close = s.find(q, i);
        if (close == std::string_view::npos) close = s.size();
        value = std::string(s.substr(i, close - i));
        i = close + 1;
      } else {
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) {
          value.push_back(s[i]);
          ++i;
        }
      }
    }
    if (!name.empty()) out.emplace_back(std::move(name), std::move(value));
  }
  return out;
}

}  // namespace

std::string decode_entities(std::string_view text) {
  static const std::pair<std::string_view, std::string_view> kNamed[] = {
      {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", " "}};
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(text[i++]);
      continue;
    }
    auto body = text.substr(i + 1, semi - i - 1);
    bool done = false;
    if (!body.empty() && body[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
      bool ok = body.size() > (hex ? 2u : 1u);
      for (std::size_t k = hex ? 2 : 1; k < body.size() && ok; ++k) {
        auto c = static_cast<unsigned char>(body[k]);
        if (hex && std::isxdigit(c)) {
          cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(c) ? c - '0' : (std::tolower(c) - 'a' + 10));
        } else if (!hex && std::isdigit(c)) {
          cp = cp * 10 + (c - '0');
        } else {
          ok = false;
        }
        if (cp > 0x10FFFF) ok = false;
      }
      if (ok) {
        append_utf8(out, cp);
        done = true;
      }
    } else {
      for (const auto& [name, value] : kNamed) {
        if (body == name) {
          out += value;
          done = true;
          break;
        }
      }
    }
    if (done) {
      i = semi + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

PageMeta extract_page_meta(std::string_view html) {
  PageMeta meta;
  bool have_title = false;
  std::size_t pos = 0;
  while (auto tag = next_tag(html, pos)) {
    pos = tag->end;
    if (tag->name == "title" && !have_title) {
      have_title = true;
      // An unterminated title is dropped.
      auto close = next_tag(html, tag->end);
      if (close && close->name == "/title") {
        meta.title = collapse_ws(decode_entities(html.substr(tag->end, close->begin - tag->end)));
        pos = close->end;
      }
    } else if (tag->name == "meta") {
      std::string name, content;
      for (auto& [k, v] : parse_attributes(tag->attributes)) {
        if (k == "name" || k == "property") name = to_lower(v);
        if (k == "content") content = v;
      }
      content = collapse_ws(decode_entities(content));
      if (name == "keywords" && meta.meta_keywords.empty()) {
        std::size_t start = 0;
        while (start <= content.size()) {
          auto comma = content.find(',', start);
          if (comma == std::string::npos) comma = content.size();
          auto kw = collapse_ws(to_lower(std::string_view(content).substr(start, comma - start)));
          if (!kw.empty()) meta.meta_keywords.push_back(std::move(kw));
          start = comma + 1;
        }
      } else if (name == "description" && meta.meta_description.empty()) {
        meta.meta_description = content;
      }
    }
  }
  return meta;
}

std::string html_to_text(std::string_view html) {
  std::string out;
  std::size_t pos = 0;
  while (pos < html.size()) {
    auto tag = next_tag(html, pos);
    std::size_t stop = tag ? tag->begin : html.size();
    // next_tag steps over comments, so the text run may still hold some.
    auto chunk = html.substr(pos, stop - pos);
    while (!chunk.empty()) {
      auto c = chunk.find("<!--");
      out += decode_entities(chunk.substr(0, c));
      if (c == std::string_view::npos) break;
      auto close = chunk.find("-->", c + 4);
      chunk = close == std::string_view::npos ? std::string_view{} : chunk.substr(close + 3);
      out.push_back(' ');
    }
    out.push_back(' ');
    if (!tag) break;
    pos = tag->end;
    if (tag->name == "script" || tag->name == "style") {
      std::size_t scan = pos;
      std::size_t found = std::string_view::npos;
      while (auto t2 = next_tag(html, scan)) {
        if (t2->name == "/" + tag->name) {
          found = t2->end;
          break;
        }
        scan = t2->end;
      }
      pos = found == std::string_view::npos ? html.size() : found;
    }
  }
  return collapse_ws(out);
}

}  // namespace sieu

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sieu {

struct PageMeta {
  std::string title;
  std::vector<std::string> meta_keywords;
  std::string meta_description;

  bool operator==(const PageMeta&) const = default;
};

/// Tolerant scan for <title> and <meta name=keywords|description>. Never
/// throws; missing or malformed tags leave the field empty.
PageMeta extract_page_meta(std::string_view html);

/// Visible text with tags, comments, <script> and <style> removed and
/// whitespace collapsed.
std::string html_to_text(std::string_view html);

/// Decodes the common named entities and numeric character references.
std::string decode_entities(std::string_view text);

}  // namespace sieu

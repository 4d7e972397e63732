#include "sieu/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <variant>

#include "sieu/error.hpp"

namespace sieu {

namespace {

constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";

std::string rdf(std::string_view local) { return std::string(kRdf) + std::string(local); }
std::string rdfs(std::string_view local) { return std::string(kRdfs) + std::string(local); }
std::string owl(std::string_view local) { return std::string(kOwl) + std::string(local); }
std::string skos(std::string_view local) { return std::string(kSkos) + std::string(local); }

// ---------------------------------------------------------------- lexer

enum class Tok {
  IriRef, PName, A, String, LangTag, DoubleCaret, Prefix, Base, Dot,
  Semicolon, Comma, LBracket, RBracket, LParen, RParen, Literal, BlankLabel, End
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& source) : s_(text), source_(source) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (i_ >= s_.size()) return t;
    char c = s_[i_];
    switch (c) {
      case '.':
        if (i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) break;
        advance();
        t.kind = Tok::Dot;
        return t;
      case ';': advance(); t.kind = Tok::Semicolon; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '[': advance(); t.kind = Tok::LBracket; return t;
      case ']': advance(); t.kind = Tok::RBracket; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case '<': return iri(t);
      case '"':
      case '\'': return string(t);
      case '@': return at_keyword(t);
      case '^':
        if (peek(1) == '^') {
          advance();
          advance();
          t.kind = Tok::DoubleCaret;
          return t;
        }
        fail(t, "unexpected '^'");
      default: break;
    }
    return bare(t);
  }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(source_, at.line, at.column, message);
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < s_.size() ? s_[i_ + ahead] : '\0';
  }

  void advance() {
    if (s_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '#') {
        while (i_ < s_.size() && s_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  Token iri(Token t) {
    advance();
    while (i_ < s_.size() && s_[i_] != '>') {
      if (s_[i_] == '\n' || s_[i_] == ' ') fail(t, "unterminated IRI");
      t.text.push_back(s_[i_]);
      advance();
    }
    if (i_ >= s_.size()) fail(t, "unterminated IRI");
    advance();
    t.kind = Tok::IriRef;
    return t;
  }

  Token string(Token t) {
    char q = s_[i_];
    bool long_form = peek(1) == q && peek(2) == q;
    for (int k = 0; k < (long_form ? 3 : 1); ++k) advance();
    while (true) {
      if (i_ >= s_.size()) fail(t, "unterminated string literal");
      char c = s_[i_];
      if (long_form) {
        if (c == q && peek(1) == q && peek(2) == q) {
          advance();
          advance();
          advance();
          break;
        }
      } else {
        if (c == q) {
          advance();
          break;
        }
        if (c == '\n') fail(t, "newline in string literal");
      }
      if (c == '\\') {
        advance();
        if (i_ >= s_.size()) fail(t, "unterminated escape");
        char e = s_[i_];
        switch (e) {
          case 'n': t.text.push_back('\n'); break;
          case 't': t.text.push_back('\t'); break;
          case 'r': t.text.push_back('\r'); break;
          case 'b': t.text.push_back('\b'); break;
          case 'f': t.text.push_back('\f'); break;
          case '"': t.text.push_back('"'); break;
          case '\'': t.text.push_back('\''); break;
          case '\\': t.text.push_back('\\'); break;
          default: fail(t, std::string("unsupported escape '\\") + e + "'");
        }
        advance();
        continue;
      }
      t.text.push_back(c);
      advance();
    }
    t.kind = Tok::String;
    return t;
  }

  Token at_keyword(Token t) {
    advance();
    std::string word;
    while (i_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-')) {
      word.push_back(s_[i_]);
      advance();
    }
    if (word == "prefix") {
      t.kind = Tok::Prefix;
    } else if (word == "base") {
      t.kind = Tok::Base;
    } else if (!word.empty()) {
      t.kind = Tok::LangTag;
      t.text = word;
    } else {
      fail(t, "stray '@'");
    }
    return t;
  }

  static bool name_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80 || c == '_' || c == '-' || c == ':' ||
           c == '.' || c == '%';
  }

  Token bare(Token t) {
    while (i_ < s_.size() && name_char(s_[i_])) {
      t.text.push_back(s_[i_]);
      advance();
    }
    // A trailing '.' terminates the statement rather than the name.
    while (!t.text.empty() && t.text.back() == '.') {
      t.text.pop_back();
      --i_;
      --col_;
    }
    if (t.text.empty()) fail(t, std::string("unexpected character '") + s_[i_] + "'");
    if (t.text == "a") {
      t.kind = Tok::A;
    } else if (t.text == "PREFIX" || t.text == "prefix") {
      t.kind = Tok::Prefix;
    } else if (t.text == "BASE" || t.text == "base") {
      t.kind = Tok::Base;
    } else if (t.text.starts_with("_:")) {
      t.kind = Tok::BlankLabel;
    } else if (t.text.find(':') != std::string::npos) {
      t.kind = Tok::PName;
    } else {
      t.kind = Tok::Literal;  // numbers, booleans
    }
    return t;
  }

  std::string_view s_;
  const std::string& source_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// --------------------------------------------------------------- parser

struct Iri {
  std::string value;
};
struct Blank {
  std::string id;
};
struct Literal {
  std::string value;
  std::string lang;
};
using Term = std::variant<Iri, Blank, Literal>;

struct Triple {
  Term subject;
  std::string predicate;
  Term object;
  std::size_t line;
};

class Parser {
 public:
  Parser(std::string_view text, const std::string& source) : lex_(text, source) {
    cur_ = lex_.next();
  }

  void run(std::vector<Triple>& out, std::map<std::string, std::string>& prefixes) {
    triples_ = &out;
    prefixes_ = &prefixes;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::Prefix) {
        bool sparql_style = cur_.text == "PREFIX" || cur_.text == "prefix";
        shift();
        if (cur_.kind != Tok::PName || cur_.text.back() != ':') {
          lex_.fail(cur_, "expected prefix name ending in ':'");
        }
        std::string name = cur_.text.substr(0, cur_.text.size() - 1);
        shift();
        if (cur_.kind != Tok::IriRef) lex_.fail(cur_, "expected <IRI> after prefix name");
        (*prefixes_)[name] = resolve(cur_.text);
        shift();
        if (!sparql_style) expect(Tok::Dot, "'.' after @prefix");
      } else if (cur_.kind == Tok::Base) {
        bool sparql_style = cur_.text == "BASE" || cur_.text == "base";
        shift();
        if (cur_.kind != Tok::IriRef) lex_.fail(cur_, "expected <IRI> after @base");
        base_ = cur_.text;
        shift();
        if (!sparql_style) expect(Tok::Dot, "'.' after @base");
      } else {
        statement();
      }
    }
  }

 private:
  void shift() { cur_ = lex_.next(); }

  void expect(Tok kind, const char* what) {
    if (cur_.kind != kind) lex_.fail(cur_, std::string("expected ") + what);
    shift();
  }

  std::string resolve(const std::string& iri) const {
    if (base_.empty() || iri.find(':') != std::string::npos) return iri;
    return base_ + iri;
  }

  std::string expand(const Token& t) const {
    auto colon = t.text.find(':');
    auto prefix = t.text.substr(0, colon);
    auto it = prefixes_->find(prefix);
    if (it == prefixes_->end()) lex_.fail(t, "undeclared prefix '" + prefix + ":'");
    return it->second + t.text.substr(colon + 1);
  }

  std::optional<std::string> iri_here() {
    if (cur_.kind == Tok::IriRef) {
      auto v = resolve(cur_.text);
      shift();
      return v;
    }
    if (cur_.kind == Tok::PName) {
      auto v = expand(cur_);
      shift();
      return v;
    }
    return std::nullopt;
  }

  void statement() {
    Term subject;
    if (cur_.kind == Tok::LBracket) {
      subject = blank_property_list();
      if (cur_.kind == Tok::Dot) {
        shift();
        return;
      }
    } else if (cur_.kind == Tok::BlankLabel) {
      subject = Blank{cur_.text};
      shift();
    } else if (auto iri = iri_here()) {
      subject = Iri{*iri};
    } else if (cur_.kind == Tok::LParen) {
      subject = collection();
    } else {
      lex_.fail(cur_, "expected subject");
    }
    predicate_object_list(subject);
    expect(Tok::Dot, "'.' at end of statement");
  }

  void predicate_object_list(const Term& subject) {
    while (true) {
      std::string predicate;
      std::size_t line = cur_.line;
      if (cur_.kind == Tok::A) {
        predicate = rdf("type");
        shift();
      } else if (auto iri = iri_here()) {
        predicate = *iri;
      } else {
        lex_.fail(cur_, "expected predicate");
      }
      while (true) {
        triples_->push_back({subject, predicate, object(), line});
        if (cur_.kind != Tok::Comma) break;
        shift();
      }
      if (cur_.kind != Tok::Semicolon) return;
      while (cur_.kind == Tok::Semicolon) shift();
      if (cur_.kind == Tok::Dot || cur_.kind == Tok::RBracket) return;
    }
  }

  Term object() {
    if (auto iri = iri_here()) return Iri{*iri};
    switch (cur_.kind) {
      case Tok::BlankLabel: {
        Blank b{cur_.text};
        shift();
        return b;
      }
      case Tok::LBracket: return blank_property_list();
      case Tok::LParen: return collection();
      case Tok::String: {
        Literal lit{cur_.text, {}};
        shift();
        if (cur_.kind == Tok::LangTag) {
          lit.lang = cur_.text;
          shift();
        } else if (cur_.kind == Tok::DoubleCaret) {
          shift();
          if (!iri_here()) lex_.fail(cur_, "expected datatype IRI after '^^'");
        }
        return lit;
      }
      case Tok::Literal: {
        Literal lit{cur_.text, {}};
        shift();
        return lit;
      }
      default: lex_.fail(cur_, "expected object");
    }
  }

  Term blank_property_list() {
    expect(Tok::LBracket, "'['");
    Blank b{"_:b" + std::to_string(blank_counter_++)};
    if (cur_.kind != Tok::RBracket) predicate_object_list(b);
    expect(Tok::RBracket, "']'");
    return b;
  }

  Term collection() {
    expect(Tok::LParen, "'('");
    Blank b{"_:c" + std::to_string(blank_counter_++)};
    while (cur_.kind != Tok::RParen) {
      if (cur_.kind == Tok::End) lex_.fail(cur_, "unterminated collection");
      object();
    }
    shift();
    return b;
  }

  Lexer lex_;
  Token cur_;
  std::string base_;
  std::size_t blank_counter_ = 0;
  std::vector<Triple>* triples_ = nullptr;
  std::map<std::string, std::string>* prefixes_ = nullptr;
};

std::string normalize_label(std::string_view raw) {
  std::string out;
  for (const auto& w : split_words(to_lower(raw))) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

std::string local_name(std::string_view iri) {
  auto cut = iri.find_last_of("#/:");
  return std::string(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

void sorted_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

bool is_builtin(const std::string& iri) {
  return iri.starts_with(kRdf) || iri.starts_with(kRdfs) || iri.starts_with(kOwl);
}

void materialize_edges(std::map<std::string, Concept>& concepts) {
  for (auto& [iri, c] : concepts) c.children.clear();
  for (auto& [iri, c] : concepts) {
    sorted_unique(c.parents);
    sorted_unique(c.equivalents);
    for (const auto& p : c.parents) concepts.at(p).children.push_back(iri);
  }
  for (auto& [iri, c] : concepts) sorted_unique(c.children);
}

}  // namespace

// Turns parsed triples into a ConceptGraph.
class TurtleBuilder {
 public:
  explicit TurtleBuilder(ConceptGraph& g) : g_(g) {}

  void add(const Triple& t) {
    const auto* subject = std::get_if<Iri>(&t.subject);
    if (!subject) return;  // restriction bodies and other blank nodes
    const std::string& s = subject->value;
    const auto* obj_iri = std::get_if<Iri>(&t.object);
    const auto* obj_lit = std::get_if<Literal>(&t.object);

    if (t.predicate == rdf("type")) {
      if (!obj_iri) return;
      const auto& o = obj_iri->value;
      if (o == owl("Class") || o == rdfs("Class")) {
        touch(s);
        is_class_.insert(s);
      } else if (o == owl("NamedIndividual")) {
        touch(s);
        typed_.insert(s);
      } else if (is_builtin(o)) {
        ignored_.insert(s);  // ontology header, properties
      } else {
        touch(s);
        touch(o);
        typed_.insert(s);
        is_class_.insert(o);
        push_unique(g_.concepts_[s].parents, o);
      }
    } else if (t.predicate == rdfs("subClassOf")) {
      if (!obj_iri) {
        warn("anonymous rdfs:subClassOf target skipped (line " + std::to_string(t.line) + ")");
        return;
      }
      if (is_builtin(obj_iri->value)) return;  // owl:Thing
      touch(s);
      touch(obj_iri->value);
      is_class_.insert(s);
      is_class_.insert(obj_iri->value);
      push_unique(g_.concepts_[s].parents, obj_iri->value);
    } else if (t.predicate == rdfs("label") || t.predicate == skos("prefLabel") ||
               t.predicate == skos("altLabel")) {
      if (!obj_lit) return;
      auto label = normalize_label(obj_lit->value);
      if (label.empty()) return;
      touch(s);
      push_unique(g_.concepts_[s].labels, label);
    } else if (t.predicate == owl("equivalentClass")) {
      if (!obj_iri) {
        warn("anonymous owl:equivalentClass target skipped (line " + std::to_string(t.line) + ")");
        return;
      }
      touch(s);
      touch(obj_iri->value);
      is_class_.insert(s);
      is_class_.insert(obj_iri->value);
      push_unique(g_.concepts_[s].equivalents, obj_iri->value);
      push_unique(g_.concepts_[obj_iri->value].equivalents, s);
    } else if (warned_.insert(t.predicate).second) {
      warn("unsupported predicate <" + t.predicate + "> skipped");
    }
  }

  void finish(std::map<std::string, std::string> prefixes) {
    g_.prefixes_ = std::move(prefixes);
    for (const auto& iri : ignored_) {
      if (!touched_.contains(iri)) g_.concepts_.erase(iri);
    }
    for (auto& [iri, c] : g_.concepts_) {
      c.iri = iri;
      c.kind = (typed_.contains(iri) && !is_class_.contains(iri)) ? ConceptKind::Individual
                                                                  : ConceptKind::Class;
      if (c.labels.empty()) c.labels.push_back(label_from_local_name(local_name(iri)));
    }
    materialize_edges(g_.concepts_);
  }

 private:
  void touch(const std::string& iri) {
    touched_.insert(iri);
    g_.concepts_[iri];
  }
  void warn(std::string message) { g_.warnings_.push_back(std::move(message)); }

  ConceptGraph& g_;
  std::set<std::string> is_class_;
  std::set<std::string> typed_;
  std::set<std::string> ignored_;
  std::set<std::string> touched_;
  std::set<std::string> warned_;
};

const Concept* ConceptGraph::find(std::string_view iri) const {
  auto it = concepts_.find(std::string(iri));
  return it == concepts_.end() ? nullptr : &it->second;
}

void ConceptGraph::merge(const ConceptGraph& other) {
  for (const auto& [iri, c] : other.concepts_) {
    auto [it, inserted] = concepts_.try_emplace(iri, c);
    if (inserted) continue;
    auto& mine = it->second;
    for (const auto& l : c.labels) push_unique(mine.labels, l);
    mine.parents.insert(mine.parents.end(), c.parents.begin(), c.parents.end());
    mine.equivalents.insert(mine.equivalents.end(), c.equivalents.begin(),
                            c.equivalents.end());
    if (c.kind == ConceptKind::Class) mine.kind = ConceptKind::Class;
  }
  for (const auto& [name, base] : other.prefixes_) prefixes_.try_emplace(name, base);
  warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
  materialize_edges(concepts_);
  validate();
}

std::vector<std::vector<std::string>> ConceptGraph::individual_labels() const {
  std::vector<std::vector<std::string>> out;
  for (const auto& [iri, c] : concepts_) {
    if (c.kind != ConceptKind::Individual) continue;
    for (const auto& l : c.labels) out.push_back(split_words(l));
  }
  return out;
}

void ConceptGraph::validate() const {
  // Collapse equivalence groups (union-find), then look for a cycle.
  std::map<std::string, std::string> leader;
  for (const auto& [iri, c] : concepts_) leader[iri] = iri;
  std::function<std::string(const std::string&)> root = [&](const std::string& x) {
    auto& l = leader[x];
    if (l != x) l = root(l);
    return l;
  };
  for (const auto& [iri, c] : concepts_) {
    for (const auto& e : c.equivalents) {
      auto a = root(iri), b = root(e);
      if (a != b) leader[std::max(a, b)] = std::min(a, b);
    }
  }
  std::map<std::string, std::set<std::string>> up;
  std::map<std::string, std::string> witness;  // group -> a member, for messages
  for (const auto& [iri, c] : concepts_) {
    auto g = root(iri);
    witness.try_emplace(g, iri);
    for (const auto& p : c.parents) {
      auto pg = root(p);
      if (pg != g) up[g].insert(pg);
    }
  }

  std::map<std::string, int> color;  // 0 new, 1 on stack, 2 done
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& g) {
    color[g] = 1;
    stack.push_back(g);
    for (const auto& next : up[g]) {
      if (color[next] == 1) {
        auto from = std::find(stack.begin(), stack.end(), next);
        std::string path;
        for (auto it = from; it != stack.end(); ++it) path += witness[*it] + " -> ";
        path += witness[next];
        throw ValidationError("subclass cycle: " + path);
      }
      if (color[next] == 0) visit(next);
    }
    stack.pop_back();
    color[g] = 2;
  };
  for (const auto& [g, _] : witness) {
    if (color[g] == 0) visit(g);
  }
}

std::string label_from_local_name(std::string_view local) {
  std::string out;
  for (std::size_t i = 0; i < local.size(); ++i) {
    char c = local[i];
    if (c == '_' || c == '-') {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    bool upper = std::isupper(static_cast<unsigned char>(c)) != 0;
    if (upper && i > 0 && !out.empty() && out.back() != ' ') {
      bool prev_lower = std::islower(static_cast<unsigned char>(local[i - 1])) != 0;
      bool next_lower = i + 1 < local.size() &&
                        std::islower(static_cast<unsigned char>(local[i + 1])) != 0;
      bool prev_upper = std::isupper(static_cast<unsigned char>(local[i - 1])) != 0;
      if (prev_lower || (prev_upper && next_lower)) out.push_back(' ');
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out.empty() ? to_lower(local) : out;
}

ConceptGraph parse_turtle(std::string_view text, const std::string& source) {
  ConceptGraph graph;
  std::vector<Triple> triples;
  std::map<std::string, std::string> prefixes;
  Parser(text, source).run(triples, prefixes);

  TurtleBuilder builder(graph);
  for (const auto& t : triples) builder.add(t);
  builder.finish(std::move(prefixes));
  graph.validate();
  return graph;
}

ConceptGraph load_turtle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open ontology: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_turtle(buf.str(), path.string());
}

std::string serialize_turtle(const ConceptGraph& graph) {
  std::ostringstream out;
  out << "@prefix rdf: <" << kRdf << "> .\n";
  out << "@prefix rdfs: <" << kRdfs << "> .\n";
  out << "@prefix owl: <" << kOwl << "> .\n\n";
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q.push_back('\\');
      q.push_back(c);
    }
    return q + "\"";
  };
  auto iri_list = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ", ";
      s += "<" + v[i] + ">";
    }
    return s;
  };
  for (const auto& [iri, c] : graph.concepts()) {
    out << "<" << iri << ">";
    if (c.kind == ConceptKind::Class) {
      out << " a owl:Class";
      if (!c.parents.empty()) out << " ;\n    rdfs:subClassOf " << iri_list(c.parents);
    } else {
      out << " a owl:NamedIndividual";
      if (!c.parents.empty()) out << ", " << iri_list(c.parents);
    }
    if (!c.equivalents.empty()) out << " ;\n    owl:equivalentClass " << iri_list(c.equivalents);
    out << " ;\n    rdfs:label ";
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
      if (i) out << ", ";
      out << quote(c.labels[i]);
    }
    out << " .\n\n";
  }
  return out.str();
}

std::string_view to_string(MatchKind kind) {
  return kind == MatchKind::ExactLabel ? "exact-label" : "label-token";
}

std::vector<ConceptMatch> match_concepts(std::span<const std::string> terms,
                                         std::span<const std::vector<std::string>> phrases,
                                         const ConceptGraph& graph,
                                         const TermVariants& variants) {
  std::map<std::string, std::string, std::less<>> by_label;  // first iri wins
  struct TokenHit {
    std::size_t label_len;
    std::string iri;
  };
  std::map<std::string, TokenHit, std::less<>> by_token;
  for (const auto& [iri, c] : graph.concepts()) {
    for (const auto& label : c.labels) {
      by_label.try_emplace(label, iri);
      auto words = split_words(label);
      if (words.size() < 2) continue;
      for (const auto& w : words) {
        auto [it, inserted] = by_token.try_emplace(w, TokenHit{words.size(), iri});
        if (!inserted && words.size() < it->second.label_len) it->second = {words.size(), iri};
      }
    }
  }

  auto forms = [&](const std::string& word) {
    std::vector<std::string> out{word};
    if (variants) {
      for (auto& v : variants(word)) {
        if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
      }
    }
    return out;
  };

  auto position = [&](const std::string& word) {
    auto it = std::find(terms.begin(), terms.end(), word);
    return static_cast<std::size_t>(it - terms.begin());
  };

  std::set<std::string> consumed;
  std::vector<std::pair<std::size_t, ConceptMatch>> found;

  for (const auto& phrase : phrases) {
    for (std::size_t len = phrase.size(); len >= 2; --len) {
      for (std::size_t start = 0; start + len <= phrase.size(); ++start) {
        bool free = true;
        for (std::size_t k = start; k < start + len; ++k) {
          if (consumed.contains(phrase[k])) free = false;
        }
        if (!free) continue;
        std::vector<std::string> span(phrase.begin() + start, phrase.begin() + start + len);
        std::string joined = join(span, " ");
        std::optional<std::string> iri;
        for (const auto& last : forms(span.back())) {
          span.back() = last;
          if (auto it = by_label.find(join(span, " ")); it != by_label.end()) {
            iri = it->second;
            break;
          }
        }
        if (!iri) continue;
        for (std::size_t k = start; k < start + len; ++k) consumed.insert(phrase[k]);
        found.push_back({position(phrase[start]), {joined, *iri, MatchKind::ExactLabel}});
      }
    }
  }

  for (const auto& term : terms) {
    if (consumed.contains(term)) continue;
    for (const auto& f : forms(term)) {
      if (auto it = by_label.find(f); it != by_label.end()) {
        consumed.insert(term);
        found.push_back({position(term), {term, it->second, MatchKind::ExactLabel}});
        break;
      }
    }
  }

  for (const auto& term : terms) {
    if (consumed.contains(term)) continue;
    for (const auto& f : forms(term)) {
      if (auto it = by_token.find(f); it != by_token.end()) {
        consumed.insert(term);
        found.push_back({position(term), {term, it->second.iri, MatchKind::LabelToken}});
        break;
      }
    }
  }

  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<ConceptMatch> out;
  for (auto& [pos, m] : found) out.push_back(std::move(m));
  return out;
}

std::string_view to_string(KeywordRelation relation) {
  switch (relation) {
    case KeywordRelation::Self: return "self";
    case KeywordRelation::Equivalent: return "equivalent";
    case KeywordRelation::Parent: return "parent";
    case KeywordRelation::Child: return "child";
    case KeywordRelation::Sibling: return "sibling";
  }
  return "self";
}

double relation_weight(KeywordRelation relation) {
  switch (relation) {
    case KeywordRelation::Self: return 1.0;
    case KeywordRelation::Equivalent: return 0.9;
    case KeywordRelation::Parent:
    case KeywordRelation::Child: return 0.6;
    case KeywordRelation::Sibling: return 0.5;
  }
  return 0.0;
}

void DomainKeywordSet::add(const std::string& keyword, DomainKeyword entry) {
  auto [it, inserted] = entries_.try_emplace(keyword, entry);
  if (!inserted && entry.weight > it->second.weight) it->second = std::move(entry);
}

bool DomainKeywordSet::contains(std::string_view keyword) const {
  return entries_.contains(std::string(keyword));
}

bool DomainKeywordSet::covers(std::string_view term) const {
  for (const auto& [kw, _] : entries_) {
    if (kw == term) return true;
    for (const auto& w : split_words(kw)) {
      if (w == term) return true;
    }
  }
  return false;
}

double DomainKeywordSet::total_weight() const {
  double sum = 0.0;
  for (const auto& [_, e] : entries_) sum += e.weight;
  return sum;
}

DomainKeywordSet extract_domain_keywords(std::span<const ConceptMatch> matches,
                                         const ConceptGraph& graph,
                                         const KeywordOptions& options) {
  DomainKeywordSet out;
  for (const auto& m : matches) {
    const Concept* c = graph.find(m.concept_iri);
    if (!c) continue;
    auto add_labels = [&](const Concept& from, KeywordRelation rel) {
      for (const auto& label : from.labels) {
        out.add(label, {from.iri, c->iri, rel, relation_weight(rel)});
      }
    };
    add_labels(*c, KeywordRelation::Self);
    for (const auto& e : c->equivalents) {
      if (const auto* ec = graph.find(e)) add_labels(*ec, KeywordRelation::Equivalent);
    }

    auto walk = [&](bool upward, KeywordRelation rel) {
      std::set<std::string> seen{c->iri};
      std::vector<std::string> frontier{c->iri};
      for (int d = 0; d < options.depth && !frontier.empty(); ++d) {
        std::vector<std::string> next;
        for (const auto& iri : frontier) {
          const Concept* cur = graph.find(iri);
          for (const auto& n : upward ? cur->parents : cur->children) {
            if (seen.insert(n).second) next.push_back(n);
          }
        }
        for (const auto& n : next) add_labels(*graph.find(n), rel);
        frontier = std::move(next);
      }
    };
    walk(true, KeywordRelation::Parent);
    walk(false, KeywordRelation::Child);

    // Co-hyponyms; named individuals are not treated as siblings.
    if (options.siblings && options.depth >= 1 && c->kind == ConceptKind::Class) {
      for (const auto& p : c->parents) {
        for (const auto& s : graph.find(p)->children) {
          if (s == c->iri) continue;
          if (std::find(c->equivalents.begin(), c->equivalents.end(), s) !=
              c->equivalents.end()) {
            continue;
          }
          const Concept* sc = graph.find(s);
          if (sc->kind == ConceptKind::Class) add_labels(*sc, KeywordRelation::Sibling);
        }
      }
    }
  }
  return out;
}

}  // namespace sieu

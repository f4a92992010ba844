#pragma once

// CoNLL-U reading and writing with CorefUD `Entity` annotation in MISC.
//
// The reader keeps every line it sees so that writing an unmodified
// treebank reproduces the input byte for byte. Only the pieces needed for
// coreference (ids, morphology, trees, the Entity attribute) are decoded.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corefud/error.hpp"

namespace corefud {

enum class Column : std::uint8_t {
  Id = 0,
  Form,
  Lemma,
  Upos,
  Xpos,
  Feats,
  Head,
  Deprel,
  Deps,
  Misc,
};

inline constexpr std::size_t kColumnCount = 10;

// Token index: a word `n`, a multiword range `a-b` or an empty node `n.k`.
struct TokenId {
  enum class Kind : std::uint8_t { Word, Range, Empty };

  Kind kind = Kind::Word;
  int major = 0;  // word number, range start, or the word an empty node follows
  int minor = 0;  // range end, or the empty node's decimal part

  bool is_word() const { return kind == Kind::Word; }
  bool is_range() const { return kind == Kind::Range; }
  bool is_empty() const { return kind == Kind::Empty; }

  // Position key inside a sentence; ranges sort with the word they start at.
  std::pair<int, int> order_key() const {
    return {major, kind == Kind::Empty ? minor : 0};
  }

  std::string str() const {
    switch (kind) {
      case Kind::Word: return std::to_string(major);
      case Kind::Range: return std::to_string(major) + "-" + std::to_string(minor);
      case Kind::Empty: return std::to_string(major) + "." + std::to_string(minor);
    }
    return {};
  }

  friend bool operator==(const TokenId&, const TokenId&) = default;
};

namespace detail {

inline std::optional<int> parse_int(std::string_view s) {
  if (s.empty() || s.size() > 9) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 0) return std::nullopt;
  return value;
}

inline bool is_number(std::string_view s) { return parse_int(s).has_value(); }

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline std::optional<TokenId> parse_token_id(std::string_view s) {
  if (auto dash = s.find('-'); dash != std::string_view::npos) {
    auto a = detail::parse_int(s.substr(0, dash));
    auto b = detail::parse_int(s.substr(dash + 1));
    if (!a || !b || *a < 1 || *b <= *a) return std::nullopt;
    return TokenId{TokenId::Kind::Range, *a, *b};
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto n = detail::parse_int(s.substr(0, dot));
    auto k = detail::parse_int(s.substr(dot + 1));
    if (!n || !k || *k < 1) return std::nullopt;
    return TokenId{TokenId::Kind::Empty, *n, *k};
  }
  auto n = detail::parse_int(s);
  if (!n || *n < 1) return std::nullopt;
  return TokenId{TokenId::Kind::Word, *n, 0};
}

// One bracket of the MISC `Entity` value, e.g. `(e5-person-1-`, `e5)`, `(e9)`.
struct EntityBracket {
  enum class Kind : std::uint8_t { Open, Close, OpenClose };

  struct Part {
    int index = 0;  // 1-based
    int count = 0;
    friend bool operator==(const Part&, const Part&) = default;
  };

  Kind kind = Kind::Open;
  std::string eid;
  std::optional<Part> part;
  // Hyphen-separated fields after the eid; empty when the bracket has no `-`.
  std::vector<std::string> extra_fields;

  bool opens() const { return kind != Kind::Close; }

  // `eid` plus the `[i/n]` suffix; brackets pair up on this key.
  std::string key() const {
    if (!part) return eid;
    return eid + "[" + std::to_string(part->index) + "/" + std::to_string(part->count) + "]";
  }

  // Head-word index (1-based within the mention) when the second field is numeric.
  std::optional<int> head_index() const {
    if (extra_fields.size() < 2) return std::nullopt;
    auto v = detail::parse_int(extra_fields[1]);
    if (!v || *v < 1) return std::nullopt;
    return v;
  }

  std::string str() const {
    std::string out;
    if (kind != Kind::Close) out += '(';
    out += key();
    if (kind != Kind::Close) {
      for (const auto& f : extra_fields) {
        out += '-';
        out += f;
      }
    }
    if (kind != Kind::Open) out += ')';
    return out;
  }

  friend bool operator==(const EntityBracket&, const EntityBracket&) = default;
};

// Tokenizes an `Entity` value. Returns an error message on malformed input.
inline std::optional<std::string> parse_entity_value(std::string_view value,
                                                     std::vector<EntityBracket>& out) {
  auto parse_key = [](std::string_view key, EntityBracket& b) -> std::optional<std::string> {
    if (!key.empty() && key.back() == ']') {
      auto lb = key.find('[');
      if (lb == std::string_view::npos) return "malformed part index in '" + std::string(key) + "'";
      auto inner = key.substr(lb + 1, key.size() - lb - 2);
      auto slash = inner.find('/');
      if (slash == std::string_view::npos) return "malformed part index in '" + std::string(key) + "'";
      auto i = detail::parse_int(inner.substr(0, slash));
      auto n = detail::parse_int(inner.substr(slash + 1));
      if (!i || !n || *n < 2 || *i < 1 || *i > *n) {
        return "invalid part index in '" + std::string(key) + "'";
      }
      b.part = EntityBracket::Part{*i, *n};
      key = key.substr(0, lb);
    }
    if (key.empty()) return std::string("empty entity id");
    if (key.find_first_of("[]/()") != std::string_view::npos) {
      return "invalid entity id '" + std::string(key) + "'";
    }
    b.eid = std::string(key);
    return std::nullopt;
  };

  std::size_t i = 0;
  while (i < value.size()) {
    EntityBracket b;
    if (value[i] == '(') {
      std::size_t j = value.find_first_of("()", i + 1);
      if (j == std::string_view::npos) j = value.size();
      std::string_view body = value.substr(i + 1, j - i - 1);
      std::size_t dash = body.find('-');
      if (auto err = parse_key(body.substr(0, dash), b)) return err;
      if (dash != std::string_view::npos) {
        for (auto f : detail::split(body.substr(dash + 1), '-')) b.extra_fields.emplace_back(f);
      }
      if (j < value.size() && value[j] == ')') {
        b.kind = EntityBracket::Kind::OpenClose;
        i = j + 1;
      } else {
        b.kind = EntityBracket::Kind::Open;
        i = j;
      }
    } else {
      std::size_t j = value.find(')', i);
      if (j == std::string_view::npos) {
        return "unterminated closing bracket in Entity value '" + std::string(value) + "'";
      }
      std::string_view body = value.substr(i, j - i);
      if (body.find('(') != std::string_view::npos || body.find('-') != std::string_view::npos) {
        return "malformed closing bracket '" + std::string(body) + ")'";
      }
      if (auto err = parse_key(body, b)) return err;
      b.kind = EntityBracket::Kind::Close;
      i = j + 1;
    }
    out.push_back(std::move(b));
  }
  return std::nullopt;
}

inline std::string format_entity_value(const std::vector<EntityBracket>& brackets) {
  std::string out;
  for (const auto& b : brackets) out += b.str();
  return out;
}

// One token line. The original bytes are kept; columns are views into them.
class RawToken {
 public:
  RawToken() = default;

  // Throws ParseError on a bad column count, id or Entity value.
  static RawToken parse(std::string line, std::string_view source, std::size_t line_no) {
    RawToken t;
    t.line_ = std::move(line);
    t.line_no_ = static_cast<std::uint32_t>(line_no);
    t.index_columns(source);
    auto id = parse_token_id(t.column(Column::Id));
    if (!id) {
      throw ParseError(std::string(source), line_no,
                       "unknown token id syntax '" + std::string(t.column(Column::Id)) + "'");
    }
    t.id_ = *id;
    t.decode_entity(source);
    return t;
  }

  const TokenId& id() const { return id_; }
  std::size_t line_no() const { return line_no_; }
  const std::string& line() const { return line_; }

  std::string_view column(Column c) const {
    auto i = static_cast<std::size_t>(c);
    return std::string_view(line_).substr(starts_[i], starts_[i + 1] - starts_[i] - 1);
  }
  std::string_view form() const { return column(Column::Form); }
  std::string_view lemma() const { return column(Column::Lemma); }
  std::string_view upos() const { return column(Column::Upos); }
  std::string_view deprel() const { return column(Column::Deprel); }

  // Name/value pairs of FEATS in file order.
  std::vector<std::pair<std::string_view, std::string_view>> feats() const {
    return attributes(column(Column::Feats));
  }
  std::optional<std::string_view> feature(std::string_view name) const {
    return lookup(column(Column::Feats), name);
  }

  // Name/value pairs of MISC in file order; bare items have an empty value.
  std::vector<std::pair<std::string_view, std::string_view>> misc() const {
    return attributes(column(Column::Misc));
  }
  std::optional<std::string_view> misc(std::string_view name) const {
    return lookup(column(Column::Misc), name);
  }

  // Enhanced dependencies as (parent id, relation).
  std::vector<std::pair<TokenId, std::string_view>> deps() const {
    std::vector<std::pair<TokenId, std::string_view>> out;
    auto col = column(Column::Deps);
    if (col == "_" || col.empty()) return out;
    for (auto item : detail::split(col, '|')) {
      auto colon = item.find(':');
      auto head = item.substr(0, colon);
      auto rel = colon == std::string_view::npos ? std::string_view() : item.substr(colon + 1);
      if (head == "0") {
        out.push_back({TokenId{TokenId::Kind::Word, 0, 0}, rel});
      } else if (auto id = parse_token_id(head); id && !id->is_range()) {
        out.push_back({*id, rel});
      }
    }
    return out;
  }

  // Basic-tree parent: nullopt for `_`, 0 for the root.
  std::optional<int> head() const { return detail::parse_int(column(Column::Head)); }

  const std::vector<EntityBracket>& entity() const { return entity_; }
  bool has_entity() const { return has_entity_; }

  // Replaces the Entity attribute (or removes it when `brackets` is empty),
  // keeping every other MISC item where it was.
  void set_entity(const std::vector<EntityBracket>& brackets) {
    std::string value = format_entity_value(brackets);
    auto misc_col = column(Column::Misc);
    std::vector<std::string> items;
    bool replaced = false;
    if (misc_col != "_" && !misc_col.empty()) {
      for (auto item : detail::split(misc_col, '|')) {
        if (item.substr(0, item.find('=')) == "Entity") {
          if (!value.empty() && !replaced) items.push_back("Entity=" + value);
          replaced = true;
        } else {
          items.emplace_back(item);
        }
      }
    }
    if (!replaced && !value.empty()) items.push_back("Entity=" + value);
    std::string new_misc;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) new_misc += '|';
      new_misc += items[i];
    }
    if (new_misc.empty()) new_misc = "_";

    std::string line(line_.substr(0, starts_[static_cast<std::size_t>(Column::Misc)]));
    line += new_misc;
    line_ = std::move(line);
    index_columns({});
    entity_ = brackets;
    has_entity_ = !brackets.empty();
  }

 private:
  static std::vector<std::pair<std::string_view, std::string_view>> attributes(
      std::string_view col) {
    std::vector<std::pair<std::string_view, std::string_view>> out;
    if (col == "_" || col.empty()) return out;
    for (auto item : detail::split(col, '|')) {
      auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        out.push_back({item, {}});
      } else {
        out.push_back({item.substr(0, eq), item.substr(eq + 1)});
      }
    }
    return out;
  }

  static std::optional<std::string_view> lookup(std::string_view col, std::string_view name) {
    if (col == "_" || col.empty()) return std::nullopt;
    std::size_t start = 0;
    while (start <= col.size()) {
      std::size_t end = col.find('|', start);
      if (end == std::string_view::npos) end = col.size();
      auto item = col.substr(start, end - start);
      auto eq = item.find('=');
      if (item.substr(0, eq) == name) {
        return eq == std::string_view::npos ? std::string_view() : item.substr(eq + 1);
      }
      start = end + 1;
    }
    return std::nullopt;
  }

  void index_columns(std::string_view source) {
    std::size_t col = 0;
    starts_[0] = 0;
    for (std::size_t i = 0; i < line_.size(); ++i) {
      if (line_[i] == '\t') {
        if (++col >= kColumnCount) break;
        starts_[col] = static_cast<std::uint32_t>(i + 1);
      }
    }
    if (col != kColumnCount - 1) {
      throw ParseError(std::string(source), line_no_,
                       "expected 10 tab-separated columns, found " + std::to_string(col + 1));
    }
    starts_[kColumnCount] = static_cast<std::uint32_t>(line_.size() + 1);
  }

  void decode_entity(std::string_view source) {
    auto value = misc("Entity");
    has_entity_ = value.has_value();
    if (!value) return;
    if (auto err = parse_entity_value(*value, entity_)) {
      throw ParseError(std::string(source), line_no_, *err);
    }
  }

  std::string line_;
  std::array<std::uint32_t, kColumnCount + 1> starts_{};
  TokenId id_;
  std::uint32_t line_no_ = 0;
  bool has_entity_ = false;
  std::vector<EntityBracket> entity_;
};

struct Sentence {
  std::vector<std::string> comments;  // full lines, including the leading '#'
  std::vector<RawToken> tokens;
  std::size_t blank_lines_after = 1;
  std::size_t first_line = 0;

  std::string sent_id() const {
    for (const auto& c : comments) {
      std::string_view v = c;
      v.remove_prefix(1);
      v = detail::trim(v);
      if (v.starts_with("sent_id")) {
        auto eq = v.find('=');
        if (eq != std::string_view::npos) return std::string(detail::trim(v.substr(eq + 1)));
      }
    }
    return {};
  }

  // Indices into `tokens` of the syntactic words and empty nodes, in word order:
  // `n.k` follows word `n` and `n.(k-1)`; `0.k` precede word 1.
  std::vector<std::size_t> node_order() const {
    std::vector<std::size_t> order;
    order.reserve(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (!tokens[i].id().is_range()) order.push_back(i);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return tokens[a].id().order_key() < tokens[b].id().order_key();
    });
    return order;
  }
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
};

// Everything read from one CoNLL-U file.
struct Treebank {
  std::string source;
  std::vector<Document> documents;
  std::size_t leading_blank_lines = 0;
  bool crlf = false;
  bool final_newline = true;
};

namespace detail {

inline std::optional<std::string> newdoc_id(std::string_view comment) {
  std::string_view v = comment;
  v.remove_prefix(1);
  v = trim(v);
  if (!v.starts_with("newdoc")) return std::nullopt;
  v.remove_prefix(6);
  if (!v.empty() && v.front() != ' ' && v.front() != '\t') return std::nullopt;
  v = trim(v);
  if (v.starts_with("id")) {
    auto eq = v.find('=');
    if (eq != std::string_view::npos) return std::string(trim(v.substr(eq + 1)));
  }
  return std::string();
}

}  // namespace detail

// Checks that every Entity bracket in `doc` is closed by a bracket with the
// same eid and part index before the document ends. Cross-sentence mentions
// are reported to `warnings`; with `strict_sentences` they are errors.
inline void check_brackets(const Document& doc, std::string_view source,
                           Diagnostics* warnings, bool strict_sentences = false) {
  struct Open {
    std::size_t sentence;
    std::size_t line;
  };
  std::map<std::string, Open> open;
  auto where = [&](const Sentence& s, const RawToken& t, const std::string& eid) {
    return " (document '" + doc.id + "', sentence '" + s.sent_id() + "', node " + t.id().str() +
           ", eid '" + eid + "')";
  };
  std::size_t last_line = 0;
  for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
    const auto& sent = doc.sentences[si];
    for (std::size_t ti : sent.node_order()) {
      const auto& tok = sent.tokens[ti];
      last_line = tok.line_no();
      for (const auto& b : tok.entity()) {
        if (b.kind == EntityBracket::Kind::OpenClose) continue;
        std::string key = b.key();
        if (b.kind == EntityBracket::Kind::Open) {
          if (open.count(key)) {
            throw ParseError(std::string(source), tok.line_no(),
                             "entity '" + key +
                                 "' opened again while still open without distinct part indices" +
                                 where(sent, tok, b.eid));
          }
          open.emplace(key, Open{si, tok.line_no()});
        } else {
          auto it = open.find(key);
          if (it == open.end()) {
            throw ParseError(std::string(source), tok.line_no(),
                             "closing bracket without matching opening" + where(sent, tok, b.eid));
          }
          if (it->second.sentence != si) {
            std::string msg = "mention of '" + key + "' spans several sentences" +
                              where(sent, tok, b.eid);
            if (strict_sentences) throw ParseError(std::string(source), tok.line_no(), msg);
            warn(warnings, std::string(source), tok.line_no(), msg);
          }
          open.erase(it);
        }
      }
    }
    for (const auto& tok : sent.tokens) last_line = std::max(last_line, tok.line_no());
  }
  if (!open.empty()) {
    const auto& [key, where_open] = *open.begin();
    throw ParseError(std::string(source), where_open.line,
                     "unbalanced Entity bracket: '" + key + "' is never closed (document '" +
                         doc.id + "', eid '" + key.substr(0, key.find('[')) + "')");
  }
  (void)last_line;
}

// Parses CoNLL-U text. Documents start at `# newdoc` comments; anything
// before the first one belongs to an unnamed first document.
inline Treebank parse_conllu(std::string_view text, std::string source = {},
                             Diagnostics* warnings = nullptr) {
  Treebank tb;
  tb.source = std::move(source);
  if (text.empty()) return tb;

  tb.final_newline = text.back() == '\n';
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool first_line = true;

  Sentence sent;
  bool in_sentence = false;
  auto flush = [&](std::size_t blank_after) {
    sent.blank_lines_after = blank_after;
    std::optional<std::string> newdoc;
    for (const auto& c : sent.comments) {
      if (auto id = detail::newdoc_id(c)) {
        newdoc = std::move(id);
        break;
      }
    }
    if (newdoc || tb.documents.empty()) {
      tb.documents.emplace_back();
      if (newdoc) tb.documents.back().id = *newdoc;
    }
    tb.documents.back().sentences.push_back(std::move(sent));
    sent = Sentence{};
    in_sentence = false;
  };

  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (first_line) {
      tb.crlf = !line.empty() && line.back() == '\r';
      first_line = false;
    }
    if (tb.crlf && !line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (in_sentence) {
        flush(1);
      } else if (tb.documents.empty()) {
        ++tb.leading_blank_lines;
      } else {
        ++tb.documents.back().sentences.back().blank_lines_after;
      }
      continue;
    }
    if (!in_sentence) {
      in_sentence = true;
      sent.first_line = line_no;
    }
    if (line.front() == '#') {
      if (!sent.tokens.empty()) {
        throw ParseError(tb.source, line_no, "comment line after token lines in a sentence");
      }
      sent.comments.emplace_back(line);
    } else {
      sent.tokens.push_back(RawToken::parse(std::string(line), tb.source, line_no));
    }
  }
  if (in_sentence) flush(0);

  for (const auto& doc : tb.documents) check_brackets(doc, tb.source, warnings);
  return tb;
}

// Serializes a treebank. For a treebank returned by parse_conllu and not
// modified since, the output equals the parsed text byte for byte.
inline std::string write_conllu(const Treebank& tb) {
  const char* eol = tb.crlf ? "\r\n" : "\n";
  std::string out;
  for (std::size_t i = 0; i < tb.leading_blank_lines; ++i) out += eol;
  for (const auto& doc : tb.documents) {
    for (const auto& sent : doc.sentences) {
      for (const auto& c : sent.comments) {
        out += c;
        out += eol;
      }
      for (const auto& t : sent.tokens) {
        out += t.line();
        out += eol;
      }
      for (std::size_t i = 0; i < sent.blank_lines_after; ++i) out += eol;
    }
  }
  if (!tb.final_newline && !out.empty()) out.resize(out.size() - (tb.crlf ? 2 : 1));
  return out;
}

// Strict checks beyond what parsing needs: multiword lines must not carry
// Entity, empty-node ids must increase within their group, and mentions must
// stay inside one sentence when `allow_cross_sentence` is false.
inline void validate(const Treebank& tb, bool allow_cross_sentence = true,
                     Diagnostics* warnings = nullptr) {
  for (const auto& doc : tb.documents) {
    for (const auto& sent : doc.sentences) {
      int last_word = 0;
      std::pair<int, int> last_empty{-1, 0};
      for (const auto& tok : sent.tokens) {
        const auto& id = tok.id();
        if (id.is_range() && tok.has_entity()) {
          throw ParseError(tb.source, tok.line_no(),
                           "multiword token line " + id.str() + " carries an Entity annotation");
        }
        if (id.is_word()) {
          last_word = id.major;
        } else if (id.is_empty()) {
          if (id.major == last_empty.first && id.minor <= last_empty.second) {
            throw ParseError(tb.source, tok.line_no(),
                             "empty node id " + id.str() + " does not increase within its group");
          }
          if (id.major != last_empty.first && id.minor != 1) {
            warn(warnings, tb.source, tok.line_no(),
                 "empty node group " + std::to_string(id.major) + " does not start at .1");
          }
          if (id.major != last_word) {
            throw ParseError(tb.source, tok.line_no(),
                             "empty node " + id.str() + " is not placed after word " +
                                 std::to_string(id.major));
          }
          last_empty = {id.major, id.minor};
        }
      }
    }
    check_brackets(doc, tb.source, warnings, !allow_cross_sentence);
  }
}

}  // namespace corefud

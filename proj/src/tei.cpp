#include "atlas/tei.hpp"

#include <charconv>
#include <optional>
#include <unordered_set>
#include <utility>

#include "atlas/error.hpp"
#include "atlas/unicode.hpp"

namespace atlas {
namespace {

// Minimal XML tree: elements, attributes and character data. Comments,
// processing instructions and DOCTYPE are skipped; CDATA becomes text.
struct XmlNode {
  std::string name;  // empty for a text node
  std::string text;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlNode> children;

  bool is_text() const { return name.empty(); }

  std::string_view local_name() const {
    auto colon = name.rfind(':');
    return colon == std::string::npos ? std::string_view(name) : std::string_view(name).substr(colon + 1);
  }

  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes) {
      if (k == key) return &v;
    }
    return nullptr;
  }
};

class XmlReader {
 public:
  explicit XmlReader(std::string_view input) : in_(input) {}

  XmlNode document() {
    skip_misc();
    if (!starts_with("<")) fail("expected root element");
    XmlNode root = element();
    skip_misc();
    if (pos_ != in_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < in_.size(); ++i) line += in_[i] == '\n';
    throw Error(ErrorCode::MalformedXml, what, at_line(line));
  }

  bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

  void expect(std::string_view s) {
    if (!starts_with(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  void skip_until(std::string_view terminator) {
    auto end = in_.find(terminator, pos_);
    if (end == std::string_view::npos) fail("unterminated construct, missing '" + std::string(terminator) + "'");
    pos_ = end + terminator.size();
  }

  void skip_space() {
    while (pos_ < in_.size() && (in_[pos_] == ' ' || in_[pos_] == '\t' || in_[pos_] == '\n' || in_[pos_] == '\r')) {
      ++pos_;
    }
  }

  void skip_misc() {
    while (true) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<!DOCTYPE")) {
        skip_doctype();
      } else {
        return;
      }
    }
  }

  void skip_doctype() {
    int depth = 0;
    while (pos_ < in_.size()) {
      char c = in_[pos_++];
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == '>' && depth == 0) return;
    }
    fail("unterminated DOCTYPE");
  }

  static bool name_char(char c) {
    return c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '/' && c != '>' && c != '=' && c != '<' &&
           c != '"' && c != '\'';
  }

  std::string name() {
    std::size_t begin = pos_;
    while (pos_ < in_.size() && name_char(in_[pos_])) ++pos_;
    if (begin == pos_) fail("expected a name");
    return std::string(in_.substr(begin, pos_ - begin));
  }

  void append_entity(std::string& out) {
    auto end = in_.find(';', pos_);
    if (end == std::string_view::npos || end - pos_ > 12) fail("unterminated entity reference");
    auto entity = in_.substr(pos_ + 1, end - pos_ - 1);
    pos_ = end + 1;
    if (entity == "lt") out += '<';
    else if (entity == "gt") out += '>';
    else if (entity == "amp") out += '&';
    else if (entity == "quot") out += '"';
    else if (entity == "apos") out += '\'';
    else if (!entity.empty() && entity[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
      auto digits = entity.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || cp > 0x10FFFF ||
          (cp >= 0xD800 && cp <= 0xDFFF)) {
        fail("bad character reference '&" + std::string(entity) + ";'");
      }
      encode_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(entity) + ";'");
    }
  }

  static void encode_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  XmlNode element() {
    expect("<");
    XmlNode node;
    node.name = name();
    while (true) {
      skip_space();
      if (starts_with("/>")) {
        pos_ += 2;
        return node;
      }
      if (starts_with(">")) {
        ++pos_;
        break;
      }
      std::string key = name();
      skip_space();
      expect("=");
      skip_space();
      if (pos_ >= in_.size() || (in_[pos_] != '"' && in_[pos_] != '\'')) fail("expected quoted attribute value");
      char quote = in_[pos_++];
      std::string value;
      while (pos_ < in_.size() && in_[pos_] != quote) {
        if (in_[pos_] == '&') {
          append_entity(value);
        } else if (in_[pos_] == '<') {
          fail("'<' in attribute value");
        } else {
          value += in_[pos_++];
        }
      }
      if (pos_ >= in_.size()) fail("unterminated attribute value");
      ++pos_;
      node.attributes.emplace_back(std::move(key), std::move(value));
    }

    std::string text;
    auto flush_text = [&] {
      if (!text.empty()) {
        XmlNode t;
        t.text = std::move(text);
        node.children.push_back(std::move(t));
        text.clear();
      }
    };
    while (true) {
      if (pos_ >= in_.size()) fail("unclosed element <" + node.name + ">");
      if (starts_with("</")) {
        flush_text();
        pos_ += 2;
        std::string closing = name();
        if (closing != node.name) fail("mismatched </" + closing + ">, expected </" + node.name + ">");
        skip_space();
        expect(">");
        return node;
      }
      if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("<![CDATA[")) {
        pos_ += 9;
        auto end = in_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA section");
        text.append(in_.substr(pos_, end - pos_));
        pos_ = end + 3;
      } else if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<")) {
        flush_text();
        node.children.push_back(element());
      } else if (in_[pos_] == '&') {
        append_entity(text);
      } else {
        text += in_[pos_++];
      }
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
};

bool is_textpart(const XmlNode& node) {
  if (node.is_text() || node.local_name() != "div") return false;
  const auto* type = node.attribute("type");
  return type && *type == "textpart";
}

bool is_block(std::string_view name) {
  static const std::unordered_set<std::string_view> blocks = {"p", "l", "lg", "ab", "lb", "sp", "speaker",
                                                              "list", "item", "div", "cit", "quote"};
  return blocks.count(name) > 0;
}

void gather(const XmlNode& node, TeiDivision& division, std::string& raw);

TeiDivision build_division(const XmlNode& node) {
  TeiDivision division;
  const auto* n = node.attribute("n");
  if (!n || n->empty()) throw Error(ErrorCode::SchemaError, "textpart division without an n attribute");
  division.n = *n;
  if (const auto* subtype = node.attribute("subtype")) division.subtype = *subtype;
  std::string raw;
  gather(node, division, raw);
  division.text = unicode::collapse_whitespace(raw);
  return division;
}

void gather(const XmlNode& node, TeiDivision& division, std::string& raw) {
  for (const auto& child : node.children) {
    if (child.is_text()) {
      raw += child.text;
    } else if (is_textpart(child)) {
      division.children.push_back(build_division(child));
    } else if (child.local_name() == "head" || child.local_name() == "note") {
      continue;
    } else {
      bool block = is_block(child.local_name());
      if (block) raw += ' ';
      gather(child, division, raw);
      if (block) raw += ' ';
    }
  }
}

struct EditionHit {
  const XmlNode* node = nullptr;
  std::string language;
};

void find_edition(const XmlNode& node, const std::string& inherited_lang, EditionHit& hit,
                  std::string& title) {
  if (node.is_text()) return;
  std::string lang = inherited_lang;
  if (const auto* l = node.attribute("xml:lang")) lang = *l;
  if (title.empty() && node.local_name() == "title") {
    std::string raw;
    for (const auto& c : node.children) {
      if (c.is_text()) raw += c.text;
    }
    title = unicode::collapse_whitespace(raw);
  }
  if (!hit.node && node.local_name() == "div") {
    const auto* type = node.attribute("type");
    if (type && *type == "edition") {
      hit.node = &node;
      hit.language = lang;
      return;
    }
  }
  for (const auto& child : node.children) find_edition(child, lang, hit, title);
}

void flatten_into(const TeiDivision& division, std::vector<std::string>& path,
                  std::vector<std::string>& subtypes, FlattenedText& out,
                  std::optional<std::size_t>& leaf_depth, std::unordered_set<std::string>& seen) {
  path.push_back(division.n);
  subtypes.push_back(division.subtype);
  if (!division.children.empty()) {
    if (!division.text.empty()) {
      throw Error(ErrorCode::MixedContent, "division '" + DottedRef(path).str() + "' has text and child divisions");
    }
    for (const auto& child : division.children) flatten_into(child, path, subtypes, out, leaf_depth, seen);
  } else {
    if (!leaf_depth) {
      leaf_depth = path.size();
      out.metadata.citation_scheme = subtypes;
    } else if (*leaf_depth != path.size()) {
      throw Error(ErrorCode::InvariantViolation,
                  "leaf '" + DottedRef(path).str() + "' has depth " + std::to_string(path.size()) +
                      ", expected " + std::to_string(*leaf_depth));
    }
    DottedRef ref(path);
    if (!seen.insert(ref.str()).second) {
      throw Error(ErrorCode::DuplicateRef, "reference '" + ref.str() + "' repeats");
    }
    if (division.text.empty()) {
      out.warnings.push_back("dropped empty division '" + ref.str() + "'");
    } else {
      out.rows.push_back(TextRow{out.rows.size() + 1, std::move(ref), unicode::nfc(division.text)});
    }
  }
  path.pop_back();
  subtypes.pop_back();
}

}  // namespace

TeiSubsetDoc parse_tei_xml(std::string_view xml) {
  if (!unicode::is_valid_utf8(xml)) throw Error(ErrorCode::MalformedXml, "input is not valid UTF-8");
  XmlNode root = XmlReader(xml).document();
  EditionHit hit;
  TeiSubsetDoc doc;
  find_edition(root, "", hit, doc.title);
  if (!hit.node) throw Error(ErrorCode::SchemaError, "no div[type=edition] element");
  const auto* n = hit.node->attribute("n");
  if (!n) throw Error(ErrorCode::SchemaError, "edition division lacks the version URN in its n attribute");
  doc.edition = parse_cts_urn(*n);
  if (!doc.edition.version || doc.edition.passage) {
    throw Error(ErrorCode::SchemaError, "edition URN '" + *n + "' must name a version and no passage");
  }
  doc.language = hit.language;

  TeiDivision holder;
  std::string raw;
  gather(*hit.node, holder, raw);
  if (!unicode::collapse_whitespace(raw).empty()) {
    throw Error(ErrorCode::MixedContent, "edition division has text outside textpart divisions");
  }
  doc.divisions = std::move(holder.children);
  return doc;
}

FlattenedText flatten_tei_subset(const TeiSubsetDoc& doc) {
  FlattenedText out;
  out.metadata.urn = doc.edition.without_passage();
  out.metadata.language = doc.language;
  out.metadata.label = doc.title.empty() ? doc.edition.version.value_or(doc.edition.text_group) : doc.title;

  std::vector<std::string> path;
  std::vector<std::string> subtypes;
  std::optional<std::size_t> leaf_depth;
  std::unordered_set<std::string> seen;
  try {
    for (const auto& division : doc.divisions) flatten_into(division, path, subtypes, out, leaf_depth, seen);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedUrn) throw Error(ErrorCode::SchemaError, e.detail());
    throw;
  }
  return out;
}

}  // namespace atlas

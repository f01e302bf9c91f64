#include <charconv>
#include <unordered_set>

#include "json_support.hpp"

namespace atlas {

using namespace detail;

namespace {

enum class Dialect { Standard, RefColumn };

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t begin = 0;
  while (true) {
    auto tab = line.find('\t', begin);
    out.push_back(line.substr(begin, tab == std::string_view::npos ? std::string_view::npos : tab - begin));
    if (tab == std::string_view::npos) return out;
    begin = tab + 1;
  }
}

std::optional<std::uint32_t> to_uint(std::string_view text) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string field(std::string_view text) { return text == "_" ? std::string() : std::string(text); }

std::vector<std::pair<std::string, std::string>> parse_feats(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> feats;
  if (text.empty() || text == "_") return feats;
  std::unordered_set<std::string> keys;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    auto sep = text.find_first_of("| ", begin);
    auto item = text.substr(begin, sep == std::string_view::npos ? std::string_view::npos : sep - begin);
    begin = sep == std::string_view::npos ? text.size() + 1 : sep + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::SchemaError, "feature '" + std::string(item) + "' is not key=value");
    }
    std::string key(item.substr(0, eq));
    if (!keys.insert(key).second) throw Error(ErrorCode::SchemaError, "feature key '" + key + "' repeats");
    feats.emplace_back(std::move(key), std::string(item.substr(eq + 1)));
  }
  return feats;
}

std::string format_feats(const std::vector<std::pair<std::string, std::string>>& feats) {
  std::string out;
  for (const auto& [k, v] : feats) {
    if (!out.empty()) out += '|';
    out += k + "=" + v;
  }
  return out;
}

class SentenceBuilder {
 public:
  explicit SentenceBuilder(std::vector<SentenceAnalysis>& out) : out_(out) {}

  void comment(std::string_view body) {
    auto eq = body.find('=');
    if (eq == std::string_view::npos) return;
    auto trim = [](std::string_view s) {
      while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
      while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
      return s;
    };
    auto key = trim(body.substr(0, eq));
    auto value = trim(body.substr(eq + 1));
    if (key == "ref" || (key == "sent_id" && !has_ref_comment_)) {
      pending_ref_ = std::string(value);
      has_ref_comment_ = has_ref_comment_ || key == "ref";
    }
  }

  void row(const std::vector<std::string_view>& cols, std::size_t line_no) {
    Dialect dialect;
    std::size_t offset;
    if (cols.size() == 10) {
      dialect = Dialect::Standard;
      offset = 0;
      if (cols[0].find_first_of("-.") != std::string_view::npos) return;  // multiword token or empty node
    } else if (cols.size() == 11) {
      dialect = Dialect::RefColumn;
      offset = 1;
    } else {
      throw Error(ErrorCode::ColumnCountError, "expected 10 or 11 columns, found " + std::to_string(cols.size()),
                  at_line(line_no));
    }
    auto index = to_uint(cols[offset]);
    if (!index) {
      throw Error(ErrorCode::NonContiguousIndices, "index '" + std::string(cols[offset]) + "' is not an integer",
                  at_line(line_no));
    }
    if (dialect == Dialect::RefColumn && !tokens_.empty() && (cols[0] != ref_ || *index == 0)) flush();
    if (!tokens_.empty() && dialect != dialect_) {
      throw Error(ErrorCode::SchemaError, "sentence mixes CoNLL-U dialects", at_line(line_no));
    }
    if (tokens_.empty()) {
      dialect_ = dialect;
      start_line_ = line_no;
      if (dialect == Dialect::RefColumn) {
        ref_ = std::string(cols[0]);
      } else {
        if (!pending_ref_) {
          throw Error(ErrorCode::SchemaError, "sentence lacks a '# sent_id =' or '# ref =' comment",
                      at_line(line_no));
        }
        ref_ = *pending_ref_;
      }
    }
    const std::uint32_t base = dialect == Dialect::RefColumn ? 0 : 1;
    if (*index != tokens_.size() + base) {
      throw Error(ErrorCode::NonContiguousIndices,
                  "expected index " + std::to_string(tokens_.size() + base) + ", found " + std::to_string(*index),
                  at_line(line_no));
    }

    ConlluToken token;
    token.index = *index + (1 - base);
    token.form = std::string(cols[offset + 1]);
    if (dialect == Dialect::Standard) {
      // ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL DEPS MISC
      token.lemma = field(cols[2]);
      token.upos = field(cols[3]);
      token.xpos = field(cols[4]);
      token.feats = parse_feats(cols[5]);
      token.head = head_value(cols[6], 0, line_no);
      token.deprel = field(cols[7]);
      token.deps = field(cols[8]);
      token.misc = field(cols[9]);
    } else {
      // REF ID FORM UPOS XPOS FEATS LEMMA DEPREL HEAD DEPS MISC
      token.upos = field(cols[3]);
      token.xpos = field(cols[4]);
      try {
        token.feats = parse_feats(cols[5]);
      } catch (const Error& e) {
        throw e.at(at_line(line_no));
      }
      token.lemma = field(cols[6]);
      token.deprel = field(cols[7]);
      token.head = head_value(cols[8], 1, line_no);
      token.deps = field(cols[9]);
      token.misc = field(cols[10]);
    }
    tokens_.push_back(std::move(token));
  }

  void flush() {
    if (tokens_.empty()) return;
    for (const auto& t : tokens_) {
      if (t.head && *t.head > tokens_.size()) {
        throw Error(ErrorCode::DanglingHead,
                    "token " + std::to_string(t.index) + " points to missing head " + std::to_string(*t.head),
                    at_line(start_line_));
      }
    }
    DottedRef ref;
    try {
      ref = DottedRef::parse(ref_);
    } catch (const Error& e) {
      throw Error(ErrorCode::SchemaError, "sentence reference: " + e.detail(), at_line(start_line_));
    }
    out_.push_back(SentenceAnalysis{std::move(ref), std::move(tokens_)});
    tokens_.clear();
    if (dialect_ == Dialect::Standard) {
      pending_ref_.reset();
      has_ref_comment_ = false;
    }
  }

  void blank() {
    flush();
  }

 private:
  static std::optional<std::uint32_t> head_value(std::string_view text, std::uint32_t shift, std::size_t line_no) {
    if (text.empty() || text == "_") return std::nullopt;
    auto value = to_uint(text);
    if (!value) throw Error(ErrorCode::SchemaError, "head '" + std::string(text) + "' is not an integer", at_line(line_no));
    return *value + shift;
  }

  std::vector<SentenceAnalysis>& out_;
  std::vector<ConlluToken> tokens_;
  Dialect dialect_ = Dialect::Standard;
  std::string ref_;
  std::optional<std::string> pending_ref_;
  bool has_ref_comment_ = false;
  std::size_t start_line_ = 0;
};

}  // namespace

std::vector<SentenceAnalysis> parse_conllu(std::string_view bytes) {
  std::vector<SentenceAnalysis> sentences;
  SentenceBuilder builder(sentences);
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < bytes.size()) {
    auto newline = bytes.find('\n', begin);
    auto line = bytes.substr(begin, newline == std::string_view::npos ? std::string_view::npos : newline - begin);
    begin = newline == std::string_view::npos ? bytes.size() : newline + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      builder.blank();
    } else if (line.front() == '#') {
      builder.comment(line.substr(1));
    } else {
      builder.row(split_tabs(line), line_no);
    }
  }
  builder.flush();
  return sentences;
}

std::string write_conllu(std::span<const SentenceAnalysis> sentences) {
  auto or_blank = [](const std::string& s) { return s.empty() ? std::string("_") : s; };
  std::string out;
  for (const auto& sentence : sentences) {
    out += "# sent_id = " + sentence.ref.str() + "\n";
    for (const auto& t : sentence.tokens) {
      auto feats = format_feats(t.feats);
      out += std::to_string(t.index) + "\t" + t.form + "\t" + or_blank(t.lemma) + "\t" + or_blank(t.upos) + "\t" +
             or_blank(t.xpos) + "\t" + or_blank(feats) + "\t" + (t.head ? std::to_string(*t.head) : "_") + "\t" +
             or_blank(t.deprel) + "\t" + or_blank(t.deps) + "\t" + or_blank(t.misc) + "\n";
    }
    out += "\n";
  }
  return out;
}

json to_json(const SentenceAnalysis& sentence) {
  json tokens = json::array();
  for (const auto& t : sentence.tokens) {
    tokens.push_back({{"index", t.index},
                      {"form", t.form},
                      {"lemma", t.lemma},
                      {"upos", t.upos},
                      {"xpos", t.xpos},
                      {"feats", format_feats(t.feats)},
                      {"head", t.head ? json(*t.head) : json(nullptr)},
                      {"deprel", t.deprel},
                      {"deps", t.deps},
                      {"misc", t.misc}});
  }
  return {{"ref", sentence.ref.str()}, {"tokens", std::move(tokens)}};
}

SentenceAnalysis sentence_from_json(const json& value) {
  require_object(value, "sentence");
  SentenceAnalysis sentence;
  sentence.ref = DottedRef::parse(require_string(value, "ref"));
  for (const auto& t : require_array(value, "tokens")) {
    require_object(t, "token");
    ConlluToken token;
    token.index = static_cast<std::uint32_t>(require_integer(t, "index"));
    token.form = require_string(t, "form");
    token.lemma = require_string(t, "lemma");
    token.upos = require_string(t, "upos");
    token.xpos = require_string(t, "xpos");
    token.feats = parse_feats(require_string(t, "feats"));
    if (t.contains("head") && !t.at("head").is_null()) token.head = static_cast<std::uint32_t>(require_integer(t, "head"));
    token.deprel = require_string(t, "deprel");
    token.deps = require_string(t, "deps");
    token.misc = require_string(t, "misc");
    sentence.tokens.push_back(std::move(token));
  }
  return sentence;
}

}  // namespace atlas

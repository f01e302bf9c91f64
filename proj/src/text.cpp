#include "atlas/text.hpp"

#include <charconv>
#include <unordered_set>

#include "atlas/error.hpp"
#include "atlas/unicode.hpp"

namespace atlas {

std::string_view to_string(TokenKind kind) {
  return kind == TokenKind::Word ? "word" : "punctuation";
}

VeRef VeRef::parse(std::string_view text) {
  auto dot = text.rfind(".t");
  if (dot == std::string_view::npos || dot == 0) {
    throw Error(ErrorCode::BadVeRef, "'" + std::string(text) + "' lacks a '.tN' token suffix");
  }
  auto digits = text.substr(dot + 2);
  std::uint32_t token = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), token);
  if (digits.empty() || ec != std::errc{} || ptr != digits.data() + digits.size() || token == 0) {
    throw Error(ErrorCode::BadVeRef, "bad token index in '" + std::string(text) + "'");
  }
  try {
    return VeRef{DottedRef::parse(text.substr(0, dot)), token};
  } catch (const Error& e) {
    throw Error(ErrorCode::BadVeRef, "'" + std::string(text) + "': " + e.detail());
  }
}

std::string VeRef::str() const { return ref.str() + ".t" + std::to_string(token); }

std::string write_text_tsv(std::span<const TextRow> rows) {
  std::string out;
  for (const auto& row : rows) {
    if (row.text.find_first_of("\t\n\r") != std::string::npos) {
      throw Error(ErrorCode::ForbiddenCharacter,
                  "text of '" + row.ref.str() + "' contains a tab or line break");
    }
    out += std::to_string(row.seq);
    out += '\t';
    out += row.ref.str();
    out += '\t';
    out += row.text;
    out += '\n';
  }
  return out;
}

namespace {

bool blank(std::string_view text) {
  for (const auto& cp : unicode::decode(text)) {
    if (!unicode::is_whitespace(cp.value)) return false;
  }
  return true;
}

}  // namespace

std::vector<TextRow> read_text_tsv(std::string_view bytes) {
  std::vector<TextRow> rows;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < bytes.size()) {
    auto newline = bytes.find('\n', begin);
    auto line = bytes.substr(begin, newline == std::string_view::npos ? std::string_view::npos : newline - begin);
    begin = newline == std::string_view::npos ? bytes.size() : newline + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string_view::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string_view::npos || line.find('\t', tab2 + 1) != std::string_view::npos) {
      std::size_t columns = 1;
      for (char c : line) columns += c == '\t';
      throw Error(ErrorCode::BadColumnCount, "expected 3 columns, found " + std::to_string(columns),
                  at_line(line_no));
    }
    auto seq_text = line.substr(0, tab1);
    auto ref_text = line.substr(tab1 + 1, tab2 - tab1 - 1);
    auto text = line.substr(tab2 + 1);

    std::uint64_t seq = 0;
    auto [ptr, ec] = std::from_chars(seq_text.data(), seq_text.data() + seq_text.size(), seq);
    if (seq_text.empty() || ec != std::errc{} || ptr != seq_text.data() + seq_text.size()) {
      throw Error(ErrorCode::NonMonotoneSeq, "sequence '" + std::string(seq_text) + "' is not an integer",
                  at_line(line_no));
    }
    if (seq != rows.size() + 1) {
      throw Error(ErrorCode::NonMonotoneSeq,
                  "expected sequence " + std::to_string(rows.size() + 1) + ", found " + std::to_string(seq),
                  at_line(line_no));
    }
    if (!unicode::is_valid_utf8(line)) {
      throw Error(ErrorCode::SchemaError, "line is not valid UTF-8", at_line(line_no));
    }
    DottedRef ref;
    try {
      ref = DottedRef::parse(ref_text);
    } catch (const Error& e) {
      throw e.at(at_line(line_no));
    }
    if (!seen.insert(ref.str()).second) {
      throw Error(ErrorCode::DuplicateRef, "reference '" + ref.str() + "' repeats", at_line(line_no));
    }
    if (blank(text)) {
      throw Error(ErrorCode::InvariantViolation, "empty text for '" + ref.str() + "'", at_line(line_no));
    }
    rows.push_back({seq, std::move(ref), std::string(text)});
  }
  return rows;
}

void validate_rows(std::span<const TextRow> rows) {
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.seq != i + 1) {
      throw Error(ErrorCode::NonMonotoneSeq,
                  "expected sequence " + std::to_string(i + 1) + ", found " + std::to_string(row.seq),
                  at_record(i + 1));
    }
    if (row.ref.empty()) throw Error(ErrorCode::InvariantViolation, "empty reference", at_record(i + 1));
    if (!seen.insert(row.ref.str()).second) {
      throw Error(ErrorCode::DuplicateRef, "reference '" + row.ref.str() + "' repeats", at_record(i + 1));
    }
    if (blank(row.text)) {
      throw Error(ErrorCode::InvariantViolation, "empty text for '" + row.ref.str() + "'", at_record(i + 1));
    }
  }
}

std::vector<Token> tokenize_row(const TextRow& row) {
  const auto cps = unicode::decode(row.text);
  std::vector<Token> tokens;
  auto emit = [&](std::size_t from, std::size_t to, TokenKind kind) {
    std::size_t byte_begin = cps[from].byte_offset;
    std::size_t byte_end = cps[to - 1].byte_offset + cps[to - 1].byte_length;
    tokens.push_back(Token{VeRef{row.ref, static_cast<std::uint32_t>(tokens.size() + 1)},
                           row.text.substr(byte_begin, byte_end - byte_begin), kind, Span{from, to},
                           Span{byte_begin, byte_end}});
  };
  auto detachable = [&](std::size_t i) {
    return unicode::is_punctuation(cps[i].value) && !unicode::is_elision_mark(cps[i].value);
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (unicode::is_whitespace(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t chunk_end = i;
    while (chunk_end < cps.size() && !unicode::is_whitespace(cps[chunk_end].value)) ++chunk_end;

    std::size_t core_begin = i;
    while (core_begin < chunk_end && detachable(core_begin)) ++core_begin;
    std::size_t core_end = chunk_end;
    while (core_end > core_begin && detachable(core_end - 1)) --core_end;

    bool core_is_word = false;
    for (std::size_t k = core_begin; k < core_end; ++k) {
      if (!unicode::is_punctuation(cps[k].value)) core_is_word = true;
    }

    for (std::size_t k = i; k < core_begin; ++k) emit(k, k + 1, TokenKind::Punctuation);
    if (core_is_word) {
      emit(core_begin, core_end, TokenKind::Word);
    } else {
      for (std::size_t k = core_begin; k < core_end; ++k) emit(k, k + 1, TokenKind::Punctuation);
    }
    for (std::size_t k = core_end; k < chunk_end; ++k) emit(k, k + 1, TokenKind::Punctuation);
    i = chunk_end;
  }
  return tokens;
}

TokenizedText::TokenizedText(std::vector<TextRow> rows) : rows_(std::move(rows)) {
  validate_rows(rows_);
  std::vector<DottedRef> refs;
  refs.reserve(rows_.size());
  tokens_.reserve(rows_.size());
  for (const auto& row : rows_) {
    refs.push_back(row.ref);
    tokens_.push_back(tokenize_row(row));
  }
  index_ = ReferenceIndex(std::move(refs));
}

const Token& TokenizedText::token_by_veref(const VeRef& ve_ref) const {
  auto pos = index_.position(ve_ref.ref);
  if (!pos) throw Error(ErrorCode::UnknownReference, "no reference '" + ve_ref.ref.str() + "'");
  const auto& row_tokens = tokens_[*pos];
  if (ve_ref.token == 0 || ve_ref.token > row_tokens.size()) {
    throw Error(ErrorCode::TokenOutOfRange, "'" + ve_ref.str() + "' but row has " +
                                                std::to_string(row_tokens.size()) + " tokens");
  }
  return row_tokens[ve_ref.token - 1];
}

}  // namespace atlas

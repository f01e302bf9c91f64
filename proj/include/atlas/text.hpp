#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/urn.hpp"

namespace atlas {

/// One citable chunk of a version: document-order sequence number, reference, text.
struct TextRow {
  std::uint64_t seq = 0;
  DottedRef ref;
  std::string text;

  friend bool operator==(const TextRow&, const TextRow&) = default;
};

struct VersionMetadata {
  CtsUrn urn;  // work hierarchy only
  std::string language;
  std::string label;
  std::vector<std::string> citation_scheme;

  friend bool operator==(const VersionMetadata&, const VersionMetadata&) = default;
};

enum class TokenKind { Word, Punctuation };

std::string_view to_string(TokenKind kind);

/// Half-open [begin, end) range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

/// Token-level reference "1.1.t4": a row reference plus a 1-based token index.
struct VeRef {
  DottedRef ref;
  std::uint32_t token = 0;

  /// Throws Error(BadVeRef) unless the text ends in ".tN" with N >= 1.
  static VeRef parse(std::string_view text);
  std::string str() const;

  friend bool operator==(const VeRef&, const VeRef&) = default;
};

struct Token {
  VeRef ve_ref;
  std::string value;
  TokenKind kind = TokenKind::Word;
  Span chars;  // code points into the row text
  Span bytes;  // UTF-8 bytes into the row text

  friend bool operator==(const Token&, const Token&) = default;
};

/// Serializes rows as "seq<TAB>ref<TAB>text<LF>" lines. Throws
/// Error(ForbiddenCharacter) when a text contains a tab or line break.
std::string write_text_tsv(std::span<const TextRow> rows);

/// Parses the three-column text TSV. Errors carry the 1-based line number.
std::vector<TextRow> read_text_tsv(std::string_view bytes);

/// Checks sequence numbering, reference uniqueness and non-empty text.
void validate_rows(std::span<const TextRow> rows);

/// Splits on Unicode whitespace, then detaches leading and trailing punctuation of
/// each chunk into separate tokens. Elision marks stay attached to their word.
std::vector<Token> tokenize_row(const TextRow& row);

/// Rows of one version together with their tokens and reference index.
class TokenizedText {
 public:
  TokenizedText() = default;
  /// Validates and tokenizes. Throws on invariant violations.
  explicit TokenizedText(std::vector<TextRow> rows);

  const std::vector<TextRow>& rows() const noexcept { return rows_; }
  const std::vector<Token>& tokens(std::size_t position) const { return tokens_.at(position); }
  const ReferenceIndex& index() const noexcept { return index_; }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Throws UnknownReference or TokenOutOfRange.
  const Token& token_by_veref(const VeRef& ve_ref) const;

 private:
  std::vector<TextRow> rows_;
  std::vector<std::vector<Token>> tokens_;
  ReferenceIndex index_;
};

}  // namespace atlas

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace atlas {

enum class ErrorCode {
  MalformedUrn,
  IndexRequired,
  UnknownReference,
  InvertedRange,
  TokenOutOfRange,
  MixedContent,
  DuplicateRef,
  BadColumnCount,
  NonMonotoneSeq,
  ForbiddenCharacter,
  MalformedXml,
  SchemaError,
  BadVeRef,
  DanglingHead,
  CyclicHeads,
  ColumnCountError,
  NonContiguousIndices,
  OverlappingSpans,
  DuplicateEntryId,
  DuplicateVersion,
  UnknownVersion,
  InvariantViolation,
  IoError,
};

std::string_view code_name(ErrorCode code);

/// Location of an error inside an input file: a 1-based line or record number.
struct Locus {
  enum class Unit { Line, Record };
  Unit unit;
  std::size_t number;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail, std::optional<Locus> locus = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::optional<Locus>& locus() const noexcept { return locus_; }

  /// Same error, attributed to a position in the input.
  Error at(Locus locus) const { return Error(code_, detail_, locus); }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<Locus> locus_;
};

inline Locus at_line(std::size_t n) { return {Locus::Unit::Line, n}; }
inline Locus at_record(std::size_t n) { return {Locus::Unit::Record, n}; }

}  // namespace atlas

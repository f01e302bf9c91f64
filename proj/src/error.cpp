#include "atlas/error.hpp"

namespace atlas {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedUrn: return "MalformedUrn";
    case ErrorCode::IndexRequired: return "IndexRequired";
    case ErrorCode::UnknownReference: return "UnknownReference";
    case ErrorCode::InvertedRange: return "InvertedRange";
    case ErrorCode::TokenOutOfRange: return "TokenOutOfRange";
    case ErrorCode::MixedContent: return "MixedContent";
    case ErrorCode::DuplicateRef: return "DuplicateRef";
    case ErrorCode::BadColumnCount: return "BadColumnCount";
    case ErrorCode::NonMonotoneSeq: return "NonMonotoneSeq";
    case ErrorCode::ForbiddenCharacter: return "ForbiddenCharacter";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::BadVeRef: return "BadVeRef";
    case ErrorCode::DanglingHead: return "DanglingHead";
    case ErrorCode::CyclicHeads: return "CyclicHeads";
    case ErrorCode::ColumnCountError: return "ColumnCountError";
    case ErrorCode::NonContiguousIndices: return "NonContiguousIndices";
    case ErrorCode::OverlappingSpans: return "OverlappingSpans";
    case ErrorCode::DuplicateEntryId: return "DuplicateEntryId";
    case ErrorCode::DuplicateVersion: return "DuplicateVersion";
    case ErrorCode::UnknownVersion: return "UnknownVersion";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string render(ErrorCode code, const std::string& detail, const std::optional<Locus>& locus) {
  std::string out(code_name(code));
  if (locus) {
    out += locus->unit == Locus::Unit::Line ? " at line " : " at record ";
    out += std::to_string(locus->number);
  }
  if (!detail.empty()) {
    out += ": ";
    out += detail;
  }
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string detail, std::optional<Locus> locus)
    : std::runtime_error(render(code, detail, locus)),
      code_(code),
      detail_(std::move(detail)),
      locus_(locus) {}

}  // namespace atlas

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "atlas/text.hpp"
#include "atlas/urn.hpp"

namespace atlas {

/// A textpart division. Leaves carry text, inner divisions carry children.
struct TeiDivision {
  std::string subtype;
  std::string n;
  std::string text;  // whitespace-collapsed, inline markup dropped
  std::vector<TeiDivision> children;
};

struct TeiSubsetDoc {
  CtsUrn edition;
  std::string language;
  std::string title;
  std::vector<TeiDivision> divisions;
};

/// Reads the TEI subset: a div[type=edition] whose n attribute is the version URN,
/// holding nested div[type=textpart] elements with subtype and n attributes.
/// <head> and <note> elements are skipped. Throws MalformedXml or SchemaError.
TeiSubsetDoc parse_tei_xml(std::string_view xml);

struct FlattenedText {
  VersionMetadata metadata;
  std::vector<TextRow> rows;
  std::vector<std::string> warnings;
};

/// One row per leaf division in depth-first order. Throws MixedContent,
/// DuplicateRef or InvariantViolation (leaves at differing depths).
FlattenedText flatten_tei_subset(const TeiSubsetDoc& doc);

}  // namespace atlas

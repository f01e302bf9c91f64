#include "atlas/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "atlas/error.hpp"

namespace atlas::unicode {
namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw Error(ErrorCode::InvariantViolation, "ICU NFC normalizer unavailable");
  }
  return *norm;
}

}  // namespace

std::vector<CodePoint> decode(std::string_view utf8) {
  std::vector<CodePoint> out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    int32_t begin = i;
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) {
      throw Error(ErrorCode::SchemaError, "ill-formed UTF-8 at byte " + std::to_string(begin));
    }
    out.push_back({static_cast<char32_t>(c), static_cast<std::size_t>(begin),
                   static_cast<std::size_t>(i - begin)});
  }
  return out;
}

bool is_valid_utf8(std::string_view utf8) noexcept {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    if (c < 0) return false;
  }
  return true;
}

std::size_t length(std::string_view utf8) {
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto n = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  std::size_t count = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    ++count;
  }
  return count;
}

std::string nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  const auto& norm = nfc_instance();
  auto text = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (norm.isNormalized(text, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  icu::UnicodeString normalized = norm.normalize(text, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::SchemaError, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

bool is_nfc(std::string_view utf8) {
  UErrorCode status = U_ZERO_ERROR;
  auto text = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  bool ok = nfc_instance().isNormalized(text, status);
  return U_SUCCESS(status) && ok;
}

bool is_whitespace(char32_t c) noexcept { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_punctuation(char32_t c) noexcept { return u_ispunct(static_cast<UChar32>(c)); }

bool is_elision_mark(char32_t c) noexcept {
  switch (c) {
    case U'\'':     // apostrophe
    case U'’': // right single quotation mark
    case U'ʼ': // modifier letter apostrophe
    case U'᾽': // Greek koronis
    case U'᾿': // Greek psili
      return true;
    default:
      return false;
  }
}

std::string collapse_whitespace(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  bool pending_space = false;
  for (const auto& cp : decode(utf8)) {
    if (is_whitespace(cp.value)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out.append(utf8.substr(cp.byte_offset, cp.byte_length));
  }
  return out;
}

}  // namespace atlas::unicode

#include "json_support.hpp"

namespace atlas {

std::vector<AudioAnnotation> parse_audio_tsv(std::string_view bytes) {
  std::vector<AudioAnnotation> out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin < bytes.size()) {
    auto newline = bytes.find('\n', begin);
    auto line = bytes.substr(begin, newline == std::string_view::npos ? std::string_view::npos : newline - begin);
    begin = newline == std::string_view::npos ? bytes.size() : newline + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      std::size_t columns = 1;
      for (char c : line) columns += c == '\t';
      throw Error(ErrorCode::BadColumnCount, "expected 2 columns, found " + std::to_string(columns),
                  at_line(line_no));
    }
    AudioAnnotation annotation;
    try {
      annotation.target = parse_cts_urn(line.substr(0, tab));
    } catch (const Error& e) {
      throw e.at(at_line(line_no));
    }
    if (!annotation.target.version || !annotation.target.passage || annotation.target.passage->is_range()) {
      throw Error(ErrorCode::SchemaError, "audio target must be a point passage of a version", at_line(line_no));
    }
    annotation.media_url = std::string(line.substr(tab + 1));
    if (annotation.media_url.empty()) throw Error(ErrorCode::SchemaError, "empty media URL", at_line(line_no));
    out.push_back(std::move(annotation));
  }
  return out;
}

std::string write_audio_tsv(std::span<const AudioAnnotation> annotations) {
  std::string out;
  for (const auto& a : annotations) out += a.target.str() + "\t" + a.media_url + "\n";
  return out;
}

json to_json(const AudioAnnotation& annotation) {
  return {{"urn", annotation.target.str()}, {"media_url", annotation.media_url}};
}

}  // namespace atlas

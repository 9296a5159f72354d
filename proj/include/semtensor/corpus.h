#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semtensor {

// The three annotation sources: two FrameNet parsers and one PropBank parser.
enum class ParserId { kFnA, kFnB, kPb };

std::string_view ParserName(ParserId parser);
std::optional<ParserId> ParseParserName(std::string_view name);

// Half-open token interval [start, end).
struct Span {
  std::int32_t start = 0;
  std::int32_t end = 0;

  std::int32_t length() const { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

// Token standing in for a multi-word span: its final token.
inline std::int32_t HeadToken(const Span& span) { return span.end - 1; }

struct RoleFiller {
  std::string role;
  Span filler;
  friend bool operator==(const RoleFiller&, const RoleFiller&) = default;
};

struct FrameAnnotation {
  ParserId parser = ParserId::kFnA;
  Span trigger;
  std::string frame;
  std::vector<RoleFiller> roles;
  friend bool operator==(const FrameAnnotation&, const FrameAnnotation&) = default;
};

struct AnnotatedSentence {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<FrameAnnotation> annotations;
  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

// Parses one JSON corpus line. Returns nullopt and fills *error when the line
// is malformed or violates a span invariant.
std::optional<AnnotatedSentence> ParseSentence(std::string_view line, std::string* error);

// Inverse of ParseSentence; one line, no trailing newline.
std::string SerializeSentence(const AnnotatedSentence& sentence);

// Streams sentences from a line-delimited corpus file. Malformed lines are
// skipped and counted; blank lines are ignored.
class CorpusReader {
 public:
  explicit CorpusReader(const std::string& path);

  bool Next(AnnotatedSentence* sentence);

  std::size_t skipped() const { return skipped_; }
  std::size_t line_number() const { return line_number_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t skipped_ = 0;
  std::size_t line_number_ = 0;
};

struct Corpus {
  std::vector<AnnotatedSentence> sentences;
  std::size_t skipped_lines = 0;
};

Corpus ReadCorpus(const std::string& path);
Corpus ReadCorpora(std::span<const std::string> paths);

}  // namespace semtensor

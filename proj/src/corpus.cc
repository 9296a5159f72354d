#include "semtensor/corpus.h"

#include <iostream>

#include "json.hpp"
#include "semtensor/error.h"
#include "semtensor/text_util.h"

namespace semtensor {

namespace {

using nlohmann::json;

std::optional<Span> ParseSpan(const json& j, std::size_t num_tokens, std::string* error) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    *error = "span must be [start, end] integers";
    return std::nullopt;
  }
  const auto start = j[0].get<std::int64_t>();
  const auto end = j[1].get<std::int64_t>();
  if (start < 0 || end <= start || end > static_cast<std::int64_t>(num_tokens)) {
    *error = "span [" + std::to_string(start) + "," + std::to_string(end) +
             ") outside sentence of " + std::to_string(num_tokens) + " tokens or empty";
    return std::nullopt;
  }
  return Span{static_cast<std::int32_t>(start), static_cast<std::int32_t>(end)};
}

json SpanToJson(const Span& span) { return json::array({span.start, span.end}); }

}  // namespace

std::string_view ParserName(ParserId parser) {
  switch (parser) {
    case ParserId::kFnA: return "fn_a";
    case ParserId::kFnB: return "fn_b";
    case ParserId::kPb: return "pb";
  }
  return "";
}

std::optional<ParserId> ParseParserName(std::string_view name) {
  if (name == "fn_a") return ParserId::kFnA;
  if (name == "fn_b") return ParserId::kFnB;
  if (name == "pb") return ParserId::kPb;
  return std::nullopt;
}

std::optional<AnnotatedSentence> ParseSentence(std::string_view line, std::string* error) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) {
    *error = "not a JSON object";
    return std::nullopt;
  }
  AnnotatedSentence sentence;
  if (!j.contains("doc_id") || !j["doc_id"].is_string()) {
    *error = "missing string field doc_id";
    return std::nullopt;
  }
  sentence.doc_id = j["doc_id"].get<std::string>();
  if (!j.contains("tokens") || !j["tokens"].is_array()) {
    *error = "missing array field tokens";
    return std::nullopt;
  }
  for (const auto& tok : j["tokens"]) {
    if (!tok.is_string()) {
      *error = "non-string token";
      return std::nullopt;
    }
    sentence.tokens.push_back(tok.get<std::string>());
  }
  const std::size_t n = sentence.tokens.size();
  if (!j.contains("annotations") || !j["annotations"].is_array()) {
    *error = "missing array field annotations";
    return std::nullopt;
  }
  for (const auto& a : j["annotations"]) {
    if (!a.is_object()) {
      *error = "annotation is not an object";
      return std::nullopt;
    }
    FrameAnnotation ann;
    if (!a.contains("parser") || !a["parser"].is_string()) {
      *error = "annotation missing parser";
      return std::nullopt;
    }
    const auto parser = ParseParserName(a["parser"].get<std::string>());
    if (!parser) {
      *error = "unknown parser '" + a["parser"].get<std::string>() + "'";
      return std::nullopt;
    }
    ann.parser = *parser;
    if (!a.contains("trigger")) {
      *error = "annotation missing trigger";
      return std::nullopt;
    }
    const auto trigger = ParseSpan(a["trigger"], n, error);
    if (!trigger) return std::nullopt;
    ann.trigger = *trigger;
    if (!a.contains("frame") || !a["frame"].is_string()) {
      *error = "annotation missing frame";
      return std::nullopt;
    }
    ann.frame = a["frame"].get<std::string>();
    if (!a.contains("roles") || !a["roles"].is_array()) {
      *error = "annotation missing roles array";
      return std::nullopt;
    }
    for (const auto& r : a["roles"]) {
      if (!r.is_object() || !r.contains("role") || !r["role"].is_string() ||
          !r.contains("filler")) {
        *error = "role must be {role, filler}";
        return std::nullopt;
      }
      const auto filler = ParseSpan(r["filler"], n, error);
      if (!filler) return std::nullopt;
      ann.roles.push_back({r["role"].get<std::string>(), *filler});
    }
    sentence.annotations.push_back(std::move(ann));
  }
  return sentence;
}

std::string SerializeSentence(const AnnotatedSentence& sentence) {
  json anns = json::array();
  for (const auto& a : sentence.annotations) {
    json roles = json::array();
    for (const auto& r : a.roles) {
      roles.push_back({{"role", r.role}, {"filler", SpanToJson(r.filler)}});
    }
    anns.push_back({{"parser", std::string(ParserName(a.parser))},
                    {"trigger", SpanToJson(a.trigger)},
                    {"frame", a.frame},
                    {"roles", std::move(roles)}});
  }
  json j = {{"doc_id", sentence.doc_id}, {"tokens", sentence.tokens}, {"annotations", anns}};
  return j.dump();
}

CorpusReader::CorpusReader(const std::string& path) : path_(path), in_(path) {
  if (!in_) throw Error(ErrorCategory::kIo, "cannot open corpus: " + path);
}

bool CorpusReader::Next(AnnotatedSentence* sentence) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (text::Trim(line).empty()) continue;
    std::string error;
    auto parsed = ParseSentence(line, &error);
    if (!parsed) {
      ++skipped_;
      std::cerr << "[semtensor] " << path_ << ":" << line_number_
                << ": skipping malformed record: " << error << "\n";
      continue;
    }
    *sentence = std::move(*parsed);
    return true;
  }
  if (in_.bad()) throw Error(ErrorCategory::kIo, "read error on corpus: " + path_);
  return false;
}

Corpus ReadCorpus(const std::string& path) {
  Corpus corpus;
  CorpusReader reader(path);
  AnnotatedSentence sentence;
  while (reader.Next(&sentence)) corpus.sentences.push_back(std::move(sentence));
  corpus.skipped_lines = reader.skipped();
  if (corpus.skipped_lines > 0) {
    std::cerr << "[semtensor] " << path << ": " << corpus.skipped_lines
              << " malformed lines skipped\n";
  }
  return corpus;
}

Corpus ReadCorpora(std::span<const std::string> paths) {
  Corpus all;
  for (const auto& path : paths) {
    Corpus part = ReadCorpus(path);
    all.skipped_lines += part.skipped_lines;
    for (auto& s : part.sentences) all.sentences.push_back(std::move(s));
  }
  return all;
}

}  // namespace semtensor

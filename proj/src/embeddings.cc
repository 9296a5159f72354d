#include "semtensor/embeddings.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "semtensor/error.h"
#include "semtensor/text_util.h"

namespace semtensor {

bool Matrix::AllFinite() const {
  for (double v : data_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

EmbeddingSet::EmbeddingSet(ModeSchema schema, std::size_t dim)
    : schema_(std::move(schema)), dim_(dim) {
  if (dim == 0) throw Error(ErrorCategory::kConfig, "embedding dimension must be >= 1");
  for (const auto& mode : schema_.modes()) vectors_.emplace_back(mode.vocab.size(), dim);
}

bool EmbeddingSet::AllFinite() const {
  for (const auto& m : vectors_) {
    if (!m.AllFinite()) return false;
  }
  return true;
}

std::int64_t WordVectors::Find(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<std::int64_t>(i);
  }
  return -1;
}

WordVectors ModeVectors(const EmbeddingSet& embeddings, std::size_t mode) {
  return {embeddings.schema().mode(mode).vocab.labels(), embeddings.mode(mode)};
}

std::string FormatWordVectors(const WordVectors& vectors) {
  std::string out = std::to_string(vectors.labels.size()) + " " +
                    std::to_string(vectors.vectors.cols()) + "\n";
  for (std::size_t i = 0; i < vectors.labels.size(); ++i) {
    out += text::EscapeLabel(vectors.labels[i]);
    for (double v : vectors.vectors.row(i)) {
      out += ' ';
      out += text::FormatDouble(v);
    }
    out += '\n';
  }
  return out;
}

void WriteWordVectors(const WordVectors& vectors, const std::string& path) {
  text::WriteFile(path, FormatWordVectors(vectors));
}

WordVectors ReadWordVectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open embedding file: " + path);
  auto fail = [&](std::size_t line, const std::string& msg) {
    throw Error(ErrorCategory::kFormat, path + ":" + std::to_string(line) + ": " + msg);
  };
  std::string line;
  if (!std::getline(in, line)) fail(1, "missing 'N d' header");
  const auto header = text::Split(text::Trim(line), ' ');
  std::int64_t n = 0, d = 0;
  if (header.size() != 2 || !text::ParseInt(header[0], &n) || !text::ParseInt(header[1], &d) ||
      n < 0 || d < 1) {
    fail(1, "bad 'N d' header");
  }
  WordVectors out;
  out.vectors = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
  for (std::int64_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) fail(i + 2, "truncated file");
    const auto f = text::Split(text::Trim(line), ' ');
    if (static_cast<std::int64_t>(f.size()) != d + 1) fail(i + 2, "expected label and d values");
    out.labels.push_back(text::UnescapeLabel(f[0]));
    for (std::int64_t c = 0; c < d; ++c) {
      if (!text::ParseDouble(f[c + 1], &out.vectors.at(i, c))) fail(i + 2, "bad number");
    }
  }
  return out;
}

}  // namespace semtensor

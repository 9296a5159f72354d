#include "semtensor/knn.h"

#include <algorithm>
#include <cmath>

#include "semtensor/error.h"

namespace semtensor {

std::vector<Neighbor> NearestNeighbors(const WordVectors& vectors, std::string_view query,
                                       std::size_t k) {
  const std::int64_t q = vectors.Find(query);
  if (q < 0) {
    throw Error(ErrorCategory::kEval, "query word '" + std::string(query) + "' not in vocabulary");
  }
  const std::size_t n = vectors.labels.size();
  if (k >= n) {
    throw Error(ErrorCategory::kConfig, "k=" + std::to_string(k) +
                                            " must be smaller than the vocabulary size " +
                                            std::to_string(n));
  }
  auto norm = [&](std::size_t i) {
    double sq = 0.0;
    for (double v : vectors.vectors.row(i)) sq += v * v;
    return std::sqrt(sq);
  };
  const double q_norm = norm(static_cast<std::size_t>(q));
  if (q_norm == 0.0) {
    throw Error(ErrorCategory::kEval, "query word '" + std::string(query) + "' has a zero vector");
  }
  const auto qv = vectors.vectors.row(static_cast<std::size_t>(q));
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < n; ++i) {
    if (static_cast<std::int64_t>(i) == q) continue;
    const double ni = norm(i);
    if (ni == 0.0) continue;
    double dot = 0.0;
    const auto v = vectors.vectors.row(i);
    for (std::size_t t = 0; t < v.size(); ++t) dot += qv[t] * v[t];
    all.push_back({vectors.labels[i], dot / (q_norm * ni)});
  }
  auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.word < b.word;
  };
  const std::size_t top = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(top), all.end(), better);
  all.resize(top);
  return all;
}

}  // namespace semtensor

#include "semtensor/vocabulary.h"

#include <algorithm>

#include "semtensor/error.h"

namespace semtensor {

Vocabulary Vocabulary::FromCounts(const std::unordered_map<std::string, std::int64_t>& counts,
                                  std::int64_t threshold) {
  if (threshold < 1) {
    throw Error(ErrorCategory::kConfig, "vocabulary threshold must be >= 1");
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (const auto& [label, count] : counts) {
    if (count >= threshold) kept.emplace_back(label, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> labels;
  std::vector<std::int64_t> kept_counts;
  labels.reserve(kept.size());
  kept_counts.reserve(kept.size());
  for (auto& [label, count] : kept) {
    labels.push_back(std::move(label));
    kept_counts.push_back(count);
  }
  return FromEntries(std::move(labels), std::move(kept_counts), threshold);
}

Vocabulary Vocabulary::FromEntries(std::vector<std::string> labels,
                                   std::vector<std::int64_t> counts, std::int64_t threshold) {
  if (labels.size() != counts.size()) {
    throw Error(ErrorCategory::kFormat, "vocabulary labels/counts length mismatch");
  }
  Vocabulary vocab;
  vocab.threshold_ = threshold;
  vocab.index_.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (counts[i] < threshold) {
      throw Error(ErrorCategory::kFormat, "vocabulary entry '" + labels[i] +
                                              "' has count below threshold " +
                                              std::to_string(threshold));
    }
    if (!vocab.index_.emplace(labels[i], static_cast<std::int32_t>(i)).second) {
      throw Error(ErrorCategory::kFormat, "duplicate vocabulary entry '" + labels[i] + "'");
    }
  }
  vocab.labels_ = std::move(labels);
  vocab.counts_ = std::move(counts);
  return vocab;
}

std::int32_t Vocabulary::Find(std::string_view label) const {
  const auto it = index_.find(label);
  return it == index_.end() ? kNotFound : it->second;
}

}  // namespace semtensor

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semtensor {

// Dense label <-> id map with occurrence counts. Ids run 0..n-1 in
// descending count order, ties broken lexicographically.
class Vocabulary {
 public:
  static constexpr std::int32_t kNotFound = -1;

  Vocabulary() = default;

  // Keeps exactly the labels with count >= threshold (threshold >= 1).
  static Vocabulary FromCounts(const std::unordered_map<std::string, std::int64_t>& counts,
                               std::int64_t threshold);

  // Takes entries verbatim in the given id order; validates uniqueness and
  // the threshold invariant.
  static Vocabulary FromEntries(std::vector<std::string> labels,
                                std::vector<std::int64_t> counts, std::int64_t threshold);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  std::int64_t threshold() const { return threshold_; }

  std::int32_t Find(std::string_view label) const;
  bool Contains(std::string_view label) const { return Find(label) != kNotFound; }

  const std::string& Label(std::size_t id) const { return labels_.at(id); }
  std::int64_t Count(std::size_t id) const { return counts_.at(id); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.threshold_ == b.threshold_ && a.labels_ == b.labels_ && a.counts_ == b.counts_;
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> labels_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>> index_;
  std::int64_t threshold_ = 1;
};

}  // namespace semtensor

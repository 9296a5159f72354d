#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semtensor/vocabulary.h"

namespace semtensor {

using Id = std::uint32_t;

// TARGET is the word being embedded, CONTEXT the predicted item, FEATURE any
// auxiliary conditioning mode.
enum class ModeRole { kTarget, kContext, kFeature };

std::string_view RoleName(ModeRole role);
std::optional<ModeRole> ParseRoleName(std::string_view name);

struct Mode {
  std::string name;
  ModeRole role = ModeRole::kFeature;
  Vocabulary vocab;
  friend bool operator==(const Mode&, const Mode&) = default;
};

// Ordered named modes: exactly one TARGET, exactly one CONTEXT, unique names.
class ModeSchema {
 public:
  ModeSchema() = default;
  explicit ModeSchema(std::vector<Mode> modes);

  std::size_t size() const { return modes_.size(); }
  const Mode& mode(std::size_t i) const { return modes_.at(i); }
  const std::vector<Mode>& modes() const { return modes_; }

  std::size_t target_index() const { return target_; }
  std::size_t context_index() const { return context_; }
  std::vector<std::size_t> feature_indices() const;

  std::optional<std::size_t> Find(std::string_view name) const;
  // Like Find but throws a schema error listing the available modes.
  std::size_t IndexOf(std::string_view name) const;

  // "name(role) name(role) ...", used in error messages and logs.
  std::string Describe() const;

  friend bool operator==(const ModeSchema& a, const ModeSchema& b) { return a.modes_ == b.modes_; }

 private:
  std::vector<Mode> modes_;
  std::size_t target_ = 0;
  std::size_t context_ = 0;
};

// Immutable sparse count tensor. Cells are kept sorted lexicographically by
// index tuple; all stored counts are strictly positive.
class SparseCountTensor {
 public:
  explicit SparseCountTensor(ModeSchema schema = {}) : schema_(std::move(schema)) {}

  const ModeSchema& schema() const { return schema_; }
  std::size_t arity() const { return schema_.size(); }
  std::size_t nnz() const { return counts_.size(); }
  bool empty() const { return counts_.empty(); }

  std::span<const Id> cell(std::size_t k) const {
    return {ids_.data() + k * arity(), arity()};
  }
  double count(std::size_t k) const { return counts_[k]; }

  double TotalMass() const;
  // 0 when the cell is absent.
  double CountAt(std::span<const Id> ids) const;
  // Per-id summed mass along one mode.
  std::vector<double> Marginal(std::size_t mode) const;

  friend bool operator==(const SparseCountTensor& a, const SparseCountTensor& b) {
    return a.schema_ == b.schema_ && a.ids_ == b.ids_ && a.counts_ == b.counts_;
  }

 private:
  friend class TensorBuilder;

  ModeSchema schema_;
  std::vector<Id> ids_;
  std::vector<double> counts_;
};

// Single-writer accumulator over integer ids of a fixed schema.
class TensorBuilder {
 public:
  explicit TensorBuilder(ModeSchema schema) : schema_(std::move(schema)) {}

  // count must be finite and >= 0; zero counts are not stored.
  void Add(std::span<const Id> ids, double count);
  void Merge(const TensorBuilder& other);

  SparseCountTensor Build() const;

 private:
  ModeSchema schema_;
  std::map<std::vector<Id>, double> cells_;
};

// Accumulates records keyed by label strings. Modes with a fixed vocabulary
// reject labels outside it; the remaining modes get a vocabulary derived from
// record mass (threshold 1) when Build() runs.
class LabeledTensorBuilder {
 public:
  struct ModeSpec {
    std::string name;
    ModeRole role = ModeRole::kFeature;
    std::optional<Vocabulary> fixed_vocab;
  };

  explicit LabeledTensorBuilder(std::vector<ModeSpec> modes);

  // Returns false (and adds nothing) when a label misses a fixed vocabulary.
  bool Add(std::span<const std::string_view> labels, double count);
  void Merge(const LabeledTensorBuilder& other);

  double TotalMass() const;
  SparseCountTensor Build() const;

 private:
  struct Interner {
    std::unordered_map<std::string, Id> index;
    std::vector<std::string> labels;
  };

  std::optional<Id> Lookup(std::size_t mode, std::string_view label, bool insert);
  const std::string& LabelOf(std::size_t mode, Id id) const;

  std::vector<ModeSpec> specs_;
  std::vector<Interner> interners_;
  std::map<std::vector<Id>, double> cells_;
};

}  // namespace semtensor

#include "semtensor/tensor.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "semtensor/error.h"

namespace semtensor {

std::string_view RoleName(ModeRole role) {
  switch (role) {
    case ModeRole::kTarget: return "target";
    case ModeRole::kContext: return "context";
    case ModeRole::kFeature: return "feature";
  }
  return "";
}

std::optional<ModeRole> ParseRoleName(std::string_view name) {
  if (name == "target") return ModeRole::kTarget;
  if (name == "context") return ModeRole::kContext;
  if (name == "feature") return ModeRole::kFeature;
  return std::nullopt;
}

ModeSchema::ModeSchema(std::vector<Mode> modes) : modes_(std::move(modes)) {
  int targets = 0, contexts = 0;
  std::set<std::string> names;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (!names.insert(modes_[i].name).second) {
      throw Error(ErrorCategory::kSchema, "duplicate mode name '" + modes_[i].name + "'");
    }
    if (modes_[i].role == ModeRole::kTarget) {
      ++targets;
      target_ = i;
    } else if (modes_[i].role == ModeRole::kContext) {
      ++contexts;
      context_ = i;
    }
  }
  if (targets != 1 || contexts != 1) {
    throw Error(ErrorCategory::kSchema,
                "schema needs exactly one target and one context mode: " + Describe());
  }
}

std::vector<std::size_t> ModeSchema::feature_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].role == ModeRole::kFeature) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> ModeSchema::Find(std::string_view name) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::size_t ModeSchema::IndexOf(std::string_view name) const {
  const auto i = Find(name);
  if (!i) {
    throw Error(ErrorCategory::kSchema, "no mode named '" + std::string(name) +
                                            "'; available modes: " + Describe());
  }
  return *i;
}

std::string ModeSchema::Describe() const {
  std::string out;
  for (const auto& m : modes_) {
    if (!out.empty()) out += ' ';
    out += m.name + "(" + std::string(RoleName(m.role)) + ")";
  }
  return out;
}

double SparseCountTensor::TotalMass() const {
  double total = 0.0;
  for (double c : counts_) total += c;
  return total;
}

double SparseCountTensor::CountAt(std::span<const Id> ids) const {
  if (ids.size() != arity() || counts_.empty()) return 0.0;
  std::size_t lo = 0, hi = nnz();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const auto c = cell(mid);
    if (std::lexicographical_compare(c.begin(), c.end(), ids.begin(), ids.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < nnz() && std::equal(ids.begin(), ids.end(), cell(lo).begin())) return counts_[lo];
  return 0.0;
}

std::vector<double> SparseCountTensor::Marginal(std::size_t mode) const {
  std::vector<double> out(schema_.mode(mode).vocab.size(), 0.0);
  for (std::size_t k = 0; k < nnz(); ++k) out[cell(k)[mode]] += counts_[k];
  return out;
}

void TensorBuilder::Add(std::span<const Id> ids, double count) {
  if (ids.size() != schema_.size()) {
    throw Error(ErrorCategory::kSchema, "cell arity " + std::to_string(ids.size()) +
                                            " does not match schema " + schema_.Describe());
  }
  if (!std::isfinite(count) || count < 0.0) {
    throw Error(ErrorCategory::kNumeric, "cell counts must be finite and nonnegative");
  }
  for (std::size_t m = 0; m < ids.size(); ++m) {
    if (ids[m] >= schema_.mode(m).vocab.size()) {
      throw Error(ErrorCategory::kSchema, "id " + std::to_string(ids[m]) +
                                              " out of range for mode " + schema_.mode(m).name);
    }
  }
  if (count == 0.0) return;
  cells_[std::vector<Id>(ids.begin(), ids.end())] += count;
}

void TensorBuilder::Merge(const TensorBuilder& other) {
  if (!(other.schema_ == schema_)) {
    throw Error(ErrorCategory::kSchema, "cannot merge builders with different schemas");
  }
  for (const auto& [ids, count] : other.cells_) cells_[ids] += count;
}

SparseCountTensor TensorBuilder::Build() const {
  SparseCountTensor t(schema_);
  t.ids_.reserve(cells_.size() * schema_.size());
  t.counts_.reserve(cells_.size());
  for (const auto& [ids, count] : cells_) {
    t.ids_.insert(t.ids_.end(), ids.begin(), ids.end());
    t.counts_.push_back(count);
  }
  return t;
}

LabeledTensorBuilder::LabeledTensorBuilder(std::vector<ModeSpec> modes)
    : specs_(std::move(modes)), interners_(specs_.size()) {}

std::optional<Id> LabeledTensorBuilder::Lookup(std::size_t mode, std::string_view label,
                                               bool insert) {
  if (specs_[mode].fixed_vocab) {
    const auto id = specs_[mode].fixed_vocab->Find(label);
    if (id == Vocabulary::kNotFound) return std::nullopt;
    return static_cast<Id>(id);
  }
  auto& in = interners_[mode];
  const auto it = in.index.find(std::string(label));
  if (it != in.index.end()) return it->second;
  if (!insert) return std::nullopt;
  const Id id = static_cast<Id>(in.labels.size());
  in.labels.emplace_back(label);
  in.index.emplace(in.labels.back(), id);
  return id;
}

const std::string& LabeledTensorBuilder::LabelOf(std::size_t mode, Id id) const {
  if (specs_[mode].fixed_vocab) return specs_[mode].fixed_vocab->Label(id);
  return interners_[mode].labels[id];
}

bool LabeledTensorBuilder::Add(std::span<const std::string_view> labels, double count) {
  if (labels.size() != specs_.size()) {
    throw Error(ErrorCategory::kSchema, "record arity mismatch");
  }
  // Check fixed vocabularies first so a rejected record leaves no trace.
  for (std::size_t m = 0; m < labels.size(); ++m) {
    if (specs_[m].fixed_vocab && !specs_[m].fixed_vocab->Contains(labels[m])) return false;
  }
  std::vector<Id> ids(labels.size());
  for (std::size_t m = 0; m < labels.size(); ++m) ids[m] = *Lookup(m, labels[m], true);
  if (count != 0.0) cells_[std::move(ids)] += count;
  return true;
}

void LabeledTensorBuilder::Merge(const LabeledTensorBuilder& other) {
  std::vector<std::string_view> labels(specs_.size());
  for (const auto& [ids, count] : other.cells_) {
    for (std::size_t m = 0; m < ids.size(); ++m) labels[m] = other.LabelOf(m, ids[m]);
    Add(labels, count);
  }
}

double LabeledTensorBuilder::TotalMass() const {
  double total = 0.0;
  for (const auto& [ids, count] : cells_) total += count;
  return total;
}

SparseCountTensor LabeledTensorBuilder::Build() const {
  // Final vocabulary per mode plus a temp-id -> final-id map.
  std::vector<Mode> modes;
  std::vector<std::vector<Id>> remap(specs_.size());
  for (std::size_t m = 0; m < specs_.size(); ++m) {
    Mode mode{specs_[m].name, specs_[m].role, {}};
    if (specs_[m].fixed_vocab) {
      mode.vocab = *specs_[m].fixed_vocab;
    } else {
      std::vector<double> mass(interners_[m].labels.size(), 0.0);
      for (const auto& [ids, count] : cells_) mass[ids[m]] += count;
      std::unordered_map<std::string, std::int64_t> counts;
      for (std::size_t i = 0; i < mass.size(); ++i) {
        counts[interners_[m].labels[i]] = std::max<std::int64_t>(1, std::llround(mass[i]));
      }
      mode.vocab = Vocabulary::FromCounts(counts, 1);
      remap[m].resize(mass.size());
      for (std::size_t i = 0; i < mass.size(); ++i) {
        remap[m][i] = static_cast<Id>(mode.vocab.Find(interners_[m].labels[i]));
      }
    }
    modes.push_back(std::move(mode));
  }
  TensorBuilder builder{ModeSchema(std::move(modes))};
  std::vector<Id> ids(specs_.size());
  for (const auto& [temp, count] : cells_) {
    for (std::size_t m = 0; m < temp.size(); ++m) {
      ids[m] = specs_[m].fixed_vocab ? temp[m] : remap[m][temp[m]];
    }
    builder.Add(ids, count);
  }
  return builder.Build();
}

}  // namespace semtensor

#include "semtensor/tensor_ops.h"

#include <algorithm>
#include <ostream>
#include <set>

#include "semtensor/error.h"
#include "semtensor/extract.h"
#include "semtensor/text_util.h"

namespace semtensor {

SparseCountTensor Marginalize(const SparseCountTensor& tensor, std::span<const std::string> drop) {
  const ModeSchema& schema = tensor.schema();
  std::vector<bool> dropped(schema.size(), false);
  for (const auto& name : drop) {
    const std::size_t i = schema.IndexOf(name);
    if (schema.mode(i).role != ModeRole::kFeature) {
      throw Error(ErrorCategory::kSchema, "cannot marginalize " +
                                              std::string(RoleName(schema.mode(i).role)) +
                                              " mode '" + name + "'");
    }
    dropped[i] = true;
  }
  std::vector<Mode> modes;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (dropped[i]) continue;
    modes.push_back(schema.mode(i));
    kept.push_back(i);
  }
  TensorBuilder builder{ModeSchema(std::move(modes))};
  std::vector<Id> ids(kept.size());
  for (std::size_t k = 0; k < tensor.nnz(); ++k) {
    const auto cell = tensor.cell(k);
    for (std::size_t m = 0; m < kept.size(); ++m) ids[m] = cell[kept[m]];
    builder.Add(ids, tensor.count(k));
  }
  return builder.Build();
}

SparseCountTensor KeepFeatures(const SparseCountTensor& tensor, std::span<const std::string> keep) {
  const ModeSchema& schema = tensor.schema();
  for (const auto& name : keep) {
    const std::size_t i = schema.IndexOf(name);
    if (schema.mode(i).role != ModeRole::kFeature) {
      throw Error(ErrorCategory::kSchema, "'" + name + "' is the " +
                                              std::string(RoleName(schema.mode(i).role)) +
                                              " mode, not a feature; available modes: " +
                                              schema.Describe());
    }
  }
  std::vector<std::string> drop;
  for (std::size_t i : schema.feature_indices()) {
    const auto& name = schema.mode(i).name;
    if (std::find(keep.begin(), keep.end(), name) == keep.end()) drop.push_back(name);
  }
  return Marginalize(tensor, drop);
}

bool IsFrameSchema(const ModeSchema& schema) {
  static constexpr std::string_view kNames[] = {kTriggerMode,  kFillerMode,  kSepMode,
                                                kFnAFrameMode, kFnARoleMode, kFnBFrameMode,
                                                kFnBRoleMode,  kPbFrameMode, kPbRoleMode};
  if (schema.size() != 9) return false;
  for (std::size_t i = 0; i < 9; ++i) {
    if (schema.mode(i).name != kNames[i]) return false;
  }
  return schema.target_index() == 0 && schema.context_index() == 1;
}

SparseCountTensor CollapseFrames(const SparseCountTensor& tensor, CollapseStats* stats) {
  const ModeSchema& schema = tensor.schema();
  if (!IsFrameSchema(schema)) {
    throw Error(ErrorCategory::kSchema,
                "collapse expects the 9-mode frame schema, got: " + schema.Describe());
  }
  std::vector<LabeledTensorBuilder::ModeSpec> specs;
  specs.push_back({std::string(kTriggerMode), ModeRole::kTarget, schema.mode(0).vocab});
  specs.push_back({std::string(kFillerMode), ModeRole::kContext, std::nullopt});
  for (auto name : {kSepMode, kPbMode, kFnFrameMode, kFnRoleMode}) {
    specs.push_back({std::string(name), ModeRole::kFeature, std::nullopt});
  }
  LabeledTensorBuilder builder(std::move(specs));
  CollapseStats local;
  auto label = [&](std::span<const Id> cell, std::size_t m) -> const std::string& {
    return schema.mode(m).vocab.Label(cell[m]);
  };
  std::vector<std::string_view> out(6);
  for (std::size_t k = 0; k < tensor.nnz(); ++k) {
    const auto cell = tensor.cell(k);
    const double count = tensor.count(k);
    local.input_mass += count;
    const std::string pb = label(cell, 7) + "/" + label(cell, 8);
    out[0] = label(cell, 0);
    out[1] = label(cell, 1);
    out[2] = label(cell, 2);
    out[3] = pb;
    const bool fn_a = label(cell, 3) != kNoFrame;
    const bool fn_b = label(cell, 5) != kNoFrame;
    if (fn_a && fn_b) {
      ++local.dual_fn_cells;
      local.duplicated_mass += count;
    }
    // Placeholder pair only when neither FrameNet parser asserted.
    for (std::size_t slot : {std::size_t{3}, std::size_t{5}}) {
      const bool asserting = label(cell, slot) != kNoFrame;
      const bool emit = asserting || (!fn_a && !fn_b && slot == 3);
      if (!emit) continue;
      out[4] = label(cell, slot);
      out[5] = label(cell, slot + 1);
      builder.Add(out, count);
      local.output_mass += count;
    }
  }
  if (stats) *stats = local;
  return builder.Build();
}

SparseCountTensor SetContextMode(const SparseCountTensor& tensor, std::string_view name) {
  const ModeSchema& schema = tensor.schema();
  const std::size_t i = schema.IndexOf(name);
  if (i == schema.context_index()) return tensor;
  if (schema.mode(i).role != ModeRole::kFeature) {
    throw Error(ErrorCategory::kSchema, "cannot predict the target mode '" + std::string(name) + "'");
  }
  std::vector<Mode> modes = schema.modes();
  modes[schema.context_index()].role = ModeRole::kFeature;
  modes[i].role = ModeRole::kContext;
  TensorBuilder builder{ModeSchema(std::move(modes))};
  for (std::size_t k = 0; k < tensor.nnz(); ++k) builder.Add(tensor.cell(k), tensor.count(k));
  return builder.Build();
}

SparseCountTensor PruneRare(const SparseCountTensor& tensor, std::int64_t min_count) {
  const ModeSchema& schema = tensor.schema();
  std::vector<Mode> modes = schema.modes();
  std::vector<std::vector<std::int64_t>> remap(schema.size());
  for (std::size_t m : {schema.target_index(), schema.context_index()}) {
    const Vocabulary& old = schema.mode(m).vocab;
    std::vector<std::string> labels;
    std::vector<std::int64_t> counts;
    remap[m].assign(old.size(), -1);
    for (std::size_t id = 0; id < old.size(); ++id) {
      if (old.Count(id) < min_count) continue;
      remap[m][id] = static_cast<std::int64_t>(labels.size());
      labels.push_back(old.Label(id));
      counts.push_back(old.Count(id));
    }
    modes[m].vocab = Vocabulary::FromEntries(std::move(labels), std::move(counts),
                                             std::max(old.threshold(), min_count));
  }
  TensorBuilder builder{ModeSchema(std::move(modes))};
  std::vector<Id> ids(schema.size());
  for (std::size_t k = 0; k < tensor.nnz(); ++k) {
    const auto cell = tensor.cell(k);
    bool keep = true;
    for (std::size_t m = 0; m < cell.size() && keep; ++m) {
      if (remap[m].empty()) {
        ids[m] = cell[m];
      } else if (remap[m][cell[m]] < 0) {
        keep = false;
      } else {
        ids[m] = static_cast<Id>(remap[m][cell[m]]);
      }
    }
    if (keep) builder.Add(ids, tensor.count(k));
  }
  return builder.Build();
}

void WriteTensorStats(const SparseCountTensor& tensor, std::ostream& out) {
  const ModeSchema& schema = tensor.schema();
  const std::string mass = text::FormatDouble(tensor.TotalMass());
  out << "mode\trole\tvocab_size\tactive_entries\ttotal_mass\n";
  for (std::size_t m = 0; m < schema.size(); ++m) {
    const auto marginal = tensor.Marginal(m);
    const auto active = std::count_if(marginal.begin(), marginal.end(),
                                      [](double v) { return v > 0.0; });
    out << schema.mode(m).name << '\t' << RoleName(schema.mode(m).role) << '\t'
        << schema.mode(m).vocab.size() << '\t' << active << '\t' << mass << '\n';
  }
}

}  // namespace semtensor

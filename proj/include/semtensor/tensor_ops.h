#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "semtensor/tensor.h"

namespace semtensor {

// Mode names of the collapsed frame tensor.
inline constexpr std::string_view kPbMode = "pb";
inline constexpr std::string_view kFnFrameMode = "fn-frame";
inline constexpr std::string_view kFnRoleMode = "fn-role";

// Sums counts over the named FEATURE modes. Dropping the TARGET or CONTEXT
// mode, or naming an unknown mode, is a schema error.
SparseCountTensor Marginalize(const SparseCountTensor& tensor, std::span<const std::string> drop);

// Marginalizes every FEATURE mode not named in `keep`.
SparseCountTensor KeepFeatures(const SparseCountTensor& tensor, std::span<const std::string> keep);

bool IsFrameSchema(const ModeSchema& schema);

struct CollapseStats {
  double input_mass = 0.0;
  double output_mass = 0.0;
  std::size_t dual_fn_cells = 0;  // input cells where both FrameNet parsers asserted
  double duplicated_mass = 0.0;   // mass added by emitting those cells twice
};

// 9-mode frame tensor -> (trigger, filler, sep, pb, fn-frame, fn-role).
// Both FrameNet parsers feed shared fn-frame/fn-role vocabularies; a cell
// where both assert a frame is emitted once per parser. pb joins the PropBank
// frame and role as "frame/role".
SparseCountTensor CollapseFrames(const SparseCountTensor& tensor, CollapseStats* stats = nullptr);

// Promotes a FEATURE mode to CONTEXT; the old CONTEXT mode becomes a FEATURE.
SparseCountTensor SetContextMode(const SparseCountTensor& tensor, std::string_view name);

// Drops TARGET and CONTEXT vocabulary entries whose count is below
// min_count, together with every cell that uses them. Ids are reassigned
// densely in the original order.
SparseCountTensor PruneRare(const SparseCountTensor& tensor, std::int64_t min_count);

// One row per mode: name, role, vocabulary size, entries with nonzero mass,
// and the tensor's total mass.
void WriteTensorStats(const SparseCountTensor& tensor, std::ostream& out);

}  // namespace semtensor

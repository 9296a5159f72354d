#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semtensor {

enum class Relation { kNsubj, kDobj, kIobj, kNsubjpass };

inline constexpr std::array<std::string_view, 4> kRelationNames = {"nsubj", "dobj", "iobj",
                                                                   "nsubjpass"};

// The 20 proto-role properties, alphabetical.
inline constexpr std::array<std::string_view, 20> kSprProperties = {
    "awareness",
    "change_of_location",
    "change_of_possession",
    "change_of_state",
    "change_of_state_continuous",
    "changes_possession",
    "existed_after",
    "existed_before",
    "existed_during",
    "exists_as_physical",
    "instigation",
    "location_of_event",
    "makes_physical_contact",
    "partitive",
    "predicate_changed_argument",
    "sentient",
    "stationary",
    "volition",
    "was_for_benefit",
    "was_used",
};

inline constexpr std::size_t kOracleDim = kSprProperties.size() * kRelationNames.size();

std::optional<Relation> ParseRelation(std::string_view name);
std::optional<std::size_t> PropertyIndex(std::string_view name);

// Property-major layout: component = property * 4 + relation.
inline std::size_t OracleComponent(std::size_t property, Relation relation) {
  return property * kRelationNames.size() + static_cast<std::size_t>(relation);
}
// "property:relation"
std::string ComponentName(std::size_t component);

struct SprJudgment {
  std::string predicate;
  std::string argument;
  Relation relation = Relation::kNsubj;
  std::size_t property = 0;  // index into kSprProperties
  bool applicable = false;
  double likelihood = 1.0;  // in [1, 5]
};

// TSV with header "predicate argument relation property applicable likelihood".
// Any malformed row is a format error naming the line.
std::vector<SprJudgment> ParseSprJudgments(std::istream& in);
std::vector<SprJudgment> ReadSprJudgments(const std::string& path);
void WriteSprJudgments(std::span<const SprJudgment> judgments, std::ostream& out);

enum class OracleNorm { kL1, kL2 };
std::string_view OracleNormName(OracleNorm norm);

using OracleVector = std::array<double, kOracleDim>;

struct OracleTable {
  // Keyed by lowercased predicate; iteration order is lexicographic.
  std::map<std::string, OracleVector> vectors;
  std::size_t excluded = 0;  // predicates whose raw vector was all zero
  OracleNorm norm = OracleNorm::kL1;
};

// Component (p, r) of predicate v sums the likelihoods of its applicable
// judgments with property p and relation r; non-applicable ones add 0. Each
// vector is then normalized to unit L1 (or L2) norm.
OracleTable BuildOracle(std::span<const SprJudgment> judgments, OracleNorm norm = OracleNorm::kL1);

// TSV: "word" followed by the 80 component names.
void WriteOracle(const OracleTable& oracle, std::ostream& out);

}  // namespace semtensor

#include "semtensor/spr.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "semtensor/error.h"
#include "semtensor/text_util.h"

namespace semtensor {

std::optional<Relation> ParseRelation(std::string_view name) {
  for (std::size_t i = 0; i < kRelationNames.size(); ++i) {
    if (kRelationNames[i] == name) return static_cast<Relation>(i);
  }
  return std::nullopt;
}

std::optional<std::size_t> PropertyIndex(std::string_view name) {
  for (std::size_t i = 0; i < kSprProperties.size(); ++i) {
    if (kSprProperties[i] == name) return i;
  }
  return std::nullopt;
}

std::string ComponentName(std::size_t component) {
  const std::size_t r = kRelationNames.size();
  return std::string(kSprProperties.at(component / r)) + ":" +
         std::string(kRelationNames[component % r]);
}

std::string_view OracleNormName(OracleNorm norm) { return norm == OracleNorm::kL1 ? "l1" : "l2"; }

std::vector<SprJudgment> ParseSprJudgments(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorCategory::kFormat, "SPR file line " + std::to_string(line_no) + ": " + msg);
  };
  if (!std::getline(in, line)) {
    ++line_no;
    fail("missing header");
  }
  ++line_no;
  if (text::Trim(line) != "predicate\targument\trelation\tproperty\tapplicable\tlikelihood") {
    fail("expected header 'predicate argument relation property applicable likelihood'");
  }
  std::vector<SprJudgment> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const auto f = text::Split(text::Trim(line), '\t');
    if (f.size() != 6) fail("expected 6 tab-separated fields");
    SprJudgment j;
    j.predicate = std::string(f[0]);
    j.argument = std::string(f[1]);
    const auto rel = ParseRelation(f[2]);
    if (!rel) fail("unknown relation '" + std::string(f[2]) + "'");
    j.relation = *rel;
    const auto prop = PropertyIndex(f[3]);
    if (!prop) fail("unknown property '" + std::string(f[3]) + "'");
    j.property = *prop;
    const std::string applicable = text::Lowercase(f[4]);
    if (applicable != "true" && applicable != "false") fail("applicable must be true or false");
    j.applicable = applicable == "true";
    if (!text::ParseDouble(f[5], &j.likelihood) || !(j.likelihood >= 1.0 && j.likelihood <= 5.0)) {
      fail("likelihood must be a number in [1, 5]");
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<SprJudgment> ReadSprJudgments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open SPR file: " + path);
  return ParseSprJudgments(in);
}

void WriteSprJudgments(std::span<const SprJudgment> judgments, std::ostream& out) {
  out << "predicate\targument\trelation\tproperty\tapplicable\tlikelihood\n";
  for (const auto& j : judgments) {
    out << j.predicate << '\t' << j.argument << '\t'
        << kRelationNames[static_cast<std::size_t>(j.relation)] << '\t'
        << kSprProperties[j.property] << '\t' << (j.applicable ? "true" : "false") << '\t'
        << text::FormatDouble(j.likelihood) << '\n';
  }
}

OracleTable BuildOracle(std::span<const SprJudgment> judgments, OracleNorm norm) {
  std::map<std::string, OracleVector> raw;
  for (const auto& j : judgments) {
    auto [it, inserted] = raw.try_emplace(text::Lowercase(j.predicate));
    if (inserted) it->second.fill(0.0);
    if (j.applicable) it->second[OracleComponent(j.property, j.relation)] += j.likelihood;
  }
  OracleTable table;
  table.norm = norm;
  for (auto& [predicate, v] : raw) {
    double z = 0.0;
    for (double c : v) z += norm == OracleNorm::kL1 ? c : c * c;
    if (norm == OracleNorm::kL2) z = std::sqrt(z);
    if (z == 0.0) {
      ++table.excluded;
      continue;
    }
    for (double& c : v) c /= z;
    table.vectors.emplace(predicate, v);
  }
  return table;
}

void WriteOracle(const OracleTable& oracle, std::ostream& out) {
  out << "word";
  for (std::size_t c = 0; c < kOracleDim; ++c) out << '\t' << ComponentName(c);
  out << '\n';
  for (const auto& [word, v] : oracle.vectors) {
    out << word;
    for (double c : v) out << '\t' << text::FormatDouble(c);
    out << '\n';
  }
}

}  // namespace semtensor

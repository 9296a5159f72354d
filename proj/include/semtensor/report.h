#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semtensor/embeddings.h"
#include "semtensor/spr.h"

namespace semtensor {

// 100 * (score - baseline) / baseline; baseline must be > 0.
double RelativeChange(double score, double baseline);

struct EvalReport {
  std::string model_id;
  double qvec = 0.0;
  std::size_t overlap_n = 0;
  double baseline_w2v = 0.0;
  double baseline_3tensor = 0.0;
  double delta_w2v_pct = 0.0;
  double delta_3tensor_pct = 0.0;
  std::string ablation;
};

// Sorted words present (after lowercasing) in every vector set and in the
// oracle. When two labels of one set lowercase alike, the lower id wins.
std::vector<std::string> OverlapVocabulary(std::span<const WordVectors* const> sets,
                                           const OracleTable& oracle);

// QVEC-CCA of `vectors` against the oracle, restricted to `overlap` rows.
double ScoreOnOverlap(const WordVectors& vectors, const OracleTable& oracle,
                      std::span<const std::string> overlap);

// Scores the model and both baselines on one shared overlap vocabulary.
EvalReport Evaluate(const std::string& model_id, const std::string& ablation,
                    const WordVectors& model, const WordVectors& baseline_w2v,
                    const WordVectors& baseline_3tensor, const OracleTable& oracle);

// TSV: model_id qvec overlap_n baseline_w2v baseline_3tensor delta_w2v_pct
// delta_3tensor_pct ablation
void WriteReport(std::span<const EvalReport> rows, std::ostream& out);
std::vector<EvalReport> ParseReport(std::istream& in);
// Replaces the row with the same model_id or appends a new one.
void UpsertReport(std::vector<EvalReport>& rows, const EvalReport& row);

// Plot-ready CSV "model,ablation,baseline,delta_pct"; one row per
// (model, baseline) pair.
void WriteDeltaCsv(std::span<const EvalReport> rows, std::ostream& out);

}  // namespace semtensor

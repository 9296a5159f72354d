#include "semtensor/report.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "semtensor/error.h"
#include "semtensor/qvec.h"
#include "semtensor/text_util.h"

namespace semtensor {

namespace {

constexpr std::string_view kReportHeader =
    "model_id\tqvec\toverlap_n\tbaseline_w2v\tbaseline_3tensor\tdelta_w2v_pct\t"
    "delta_3tensor_pct\tablation";

std::map<std::string, std::size_t> LowercaseIndex(const WordVectors& vectors) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vectors.labels.size(); ++i) {
    index.try_emplace(text::Lowercase(vectors.labels[i]), i);
  }
  return index;
}

}  // namespace

double RelativeChange(double score, double baseline) {
  if (!(baseline > 0.0)) {
    throw Error(ErrorCategory::kEval, "relative change needs a positive baseline, got " +
                                          text::FormatDouble(baseline));
  }
  return 100.0 * (score - baseline) / baseline;
}

std::vector<std::string> OverlapVocabulary(std::span<const WordVectors* const> sets,
                                           const OracleTable& oracle) {
  std::vector<std::map<std::string, std::size_t>> indices;
  for (const auto* s : sets) indices.push_back(LowercaseIndex(*s));
  std::vector<std::string> out;
  for (const auto& [word, v] : oracle.vectors) {
    const bool everywhere = std::all_of(indices.begin(), indices.end(),
                                        [&](const auto& idx) { return idx.count(word) > 0; });
    if (everywhere) out.push_back(word);
  }
  return out;
}

double ScoreOnOverlap(const WordVectors& vectors, const OracleTable& oracle,
                      std::span<const std::string> overlap) {
  const auto index = LowercaseIndex(vectors);
  const auto n = static_cast<Eigen::Index>(overlap.size());
  Eigen::MatrixXd x(n, static_cast<Eigen::Index>(vectors.vectors.cols()));
  Eigen::MatrixXd s(n, static_cast<Eigen::Index>(kOracleDim));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& word = overlap[r];
    const auto it = index.find(word);
    const auto ot = oracle.vectors.find(word);
    if (it == index.end() || ot == oracle.vectors.end()) {
      throw Error(ErrorCategory::kEval, "overlap word '" + word + "' missing from inputs");
    }
    const auto row = vectors.vectors.row(it->second);
    for (std::size_t c = 0; c < row.size(); ++c) x(r, static_cast<Eigen::Index>(c)) = row[c];
    for (std::size_t c = 0; c < kOracleDim; ++c) s(r, static_cast<Eigen::Index>(c)) = ot->second[c];
  }
  return QvecCca(x, s);
}

EvalReport Evaluate(const std::string& model_id, const std::string& ablation,
                    const WordVectors& model, const WordVectors& baseline_w2v,
                    const WordVectors& baseline_3tensor, const OracleTable& oracle) {
  const WordVectors* sets[] = {&model, &baseline_w2v, &baseline_3tensor};
  const auto overlap = OverlapVocabulary(sets, oracle);
  if (overlap.empty()) {
    throw Error(ErrorCategory::kEval, "no vocabulary overlap between embeddings and oracle");
  }
  EvalReport r;
  r.model_id = model_id;
  r.ablation = ablation;
  r.overlap_n = overlap.size();
  r.qvec = ScoreOnOverlap(model, oracle, overlap);
  r.baseline_w2v = ScoreOnOverlap(baseline_w2v, oracle, overlap);
  r.baseline_3tensor = ScoreOnOverlap(baseline_3tensor, oracle, overlap);
  r.delta_w2v_pct = RelativeChange(r.qvec, r.baseline_w2v);
  r.delta_3tensor_pct = RelativeChange(r.qvec, r.baseline_3tensor);
  return r;
}

void WriteReport(std::span<const EvalReport> rows, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << r.model_id << '\t' << text::FormatFixed(r.qvec, 6) << '\t' << r.overlap_n << '\t'
        << text::FormatFixed(r.baseline_w2v, 6) << '\t'
        << text::FormatFixed(r.baseline_3tensor, 6) << '\t'
        << text::FormatFixed(r.delta_w2v_pct, 4) << '\t'
        << text::FormatFixed(r.delta_3tensor_pct, 4) << '\t' << r.ablation << '\n';
  }
}

std::vector<EvalReport> ParseReport(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) return {};
  if (text::Trim(line) != kReportHeader) {
    throw Error(ErrorCategory::kFormat, "report file has an unexpected header");
  }
  std::vector<EvalReport> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::Trim(line).empty()) continue;
    const auto f = text::Split(line, '\t');
    std::int64_t overlap = 0;
    EvalReport r;
    if (f.size() != 8 || !text::ParseDouble(f[1], &r.qvec) || !text::ParseInt(f[2], &overlap) ||
        !text::ParseDouble(f[3], &r.baseline_w2v) ||
        !text::ParseDouble(f[4], &r.baseline_3tensor) ||
        !text::ParseDouble(f[5], &r.delta_w2v_pct) ||
        !text::ParseDouble(f[6], &r.delta_3tensor_pct)) {
      throw Error(ErrorCategory::kFormat, "report line " + std::to_string(line_no) + " malformed");
    }
    r.model_id = std::string(f[0]);
    r.overlap_n = static_cast<std::size_t>(overlap);
    r.ablation = std::string(f[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void UpsertReport(std::vector<EvalReport>& rows, const EvalReport& row) {
  for (auto& r : rows) {
    if (r.model_id == row.model_id) {
      r = row;
      return;
    }
  }
  rows.push_back(row);
}

void WriteDeltaCsv(std::span<const EvalReport> rows, std::ostream& out) {
  out << "model,ablation,baseline,delta_pct\n";
  for (const auto& r : rows) {
    out << r.model_id << ',' << r.ablation << ",w2v," << text::FormatFixed(r.delta_w2v_pct, 4)
        << '\n';
    out << r.model_id << ',' << r.ablation << ",3tensor,"
        << text::FormatFixed(r.delta_3tensor_pct, 4) << '\n';
  }
}

}  // namespace semtensor

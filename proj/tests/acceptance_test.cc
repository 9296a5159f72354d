// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "semtensor/corpus.h"
#include "semtensor/extract.h"
#include "semtensor/factorizer.h"
#include "semtensor/pipeline.h"
#include "semtensor/qvec.h"
#include "semtensor/spr.h"
#include "semtensor/synthetic.h"
#include "semtensor/tensor_ops.h"
#include "semtensor/text_util.h"
#include "support/oracles.h"

namespace semtensor {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

// 1. The full-scale result cannot be rerun here; the README must say so and
// name the substitutes.
Outcome Criterion1() {
  const std::string readme = text::ReadFile(std::string(SEMTENSOR_SOURCE_DIR) + "/README.md");
  const bool stated = readme.find("not reproducible at desk scale") != std::string::npos;
  return {stated, stated ? "headline gains not reproducible at desk scale; stated in README, "
                           "substituted by criteria 2-9"
                         : "README lacks the non-reproducibility statement"};
}

// 2. Analytic NS gradients against central finite differences.
Outcome Criterion2() {
  const auto start = Clock::now();
  Rng rng(2024);
  double worst = 0.0;
  int instances = 0;
  for (int trial = 0; trial < 120; ++trial, ++instances) {
    const std::size_t features = trial % 4;
    const int k = std::array<int, 3>{1, 5, 15}[(trial / 4) % 3];
    std::vector<std::size_t> sizes = {4, 20};
    for (std::size_t l = 0; l < features; ++l) sizes.push_back(3);
    const ModeSchema schema = testing::NumberedSchema(sizes);
    const std::size_t d = 1 + rng.Below(8);
    const EmbeddingSet e = testing::RandomEmbeddings(schema, d, 1.0, rng);
    std::vector<Id> cell;
    for (auto n : sizes) cell.push_back(static_cast<Id>(rng.Below(n)));
    std::vector<Id> negs;
    for (int i = 0; i < k; ++i) {
      Id n;
      do n = static_cast<Id>(rng.Below(20)); while (n == cell[1]);
      negs.push_back(n);
    }
    const NsResult r = NsLossAndGrads(e, cell, negs);
    const double eps = 1e-5;
    for (const auto& g : r.grads) {
      double diff2 = 0.0, norm2 = 0.0;
      for (std::size_t t = 0; t < d; ++t) {
        EmbeddingSet plus = e, minus = e;
        plus.vec(g.mode, g.id)[t] += eps;
        minus.vec(g.mode, g.id)[t] -= eps;
        const double fd = (NsLossAndGrads(plus, cell, negs).loss -
                           NsLossAndGrads(minus, cell, negs).loss) / (2 * eps);
        diff2 += (fd - g.grad[t]) * (fd - g.grad[t]);
        norm2 += fd * fd;
      }
      worst = std::max(worst, std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-7));
    }
  }
  const double secs = Seconds(start);
  std::ostringstream out;
  out << instances << " instances, max relative error " << worst << ", " << secs << " s";
  return {worst < 1e-5 && secs < 10.0, out.str()};
}

// 3. exact_loglik against the brute-force evaluator.
Outcome Criterion3() {
  Rng rng(33);
  double worst = 0.0;
  const int tensors = 30;
  for (int trial = 0; trial < tensors; ++trial) {
    std::vector<std::size_t> sizes(2 + trial % 2);
    for (auto& n : sizes) n = 1 + rng.Below(5);
    const SparseCountTensor t = testing::RandomTensor(sizes, 1 + rng.Below(25), rng);
    const EmbeddingSet e = testing::RandomEmbeddings(t.schema(), 1 + rng.Below(4), 1.5, rng);
    worst = std::max(worst, std::abs(ExactLogLikelihood(t, e) - testing::BruteForceLogLik(t, e)));
  }
  std::ostringstream out;
  out << tensors << " tensors, max abs difference " << worst;
  return {worst <= 1e-10, out.str()};
}

// 4. With no feature modes the NS loss is the textbook SGNS loss.
Outcome Criterion4() {
  Rng rng(44);
  const ModeSchema schema = testing::NumberedSchema({10, 30});
  double worst = 0.0;
  const int instances = 2000;
  for (int trial = 0; trial < instances; ++trial) {
    const EmbeddingSet e = testing::RandomEmbeddings(schema, 1 + rng.Below(16), 1.0, rng);
    const std::vector<Id> cell = {static_cast<Id>(rng.Below(10)), static_cast<Id>(rng.Below(30))};
    std::vector<Id> negs;
    std::vector<std::vector<double>> neg_vecs;
    for (std::size_t k = 0; k < 1 + rng.Below(15); ++k) {
      Id n;
      do n = static_cast<Id>(rng.Below(30)); while (n == cell[1]);
      negs.push_back(n);
      neg_vecs.emplace_back(e.vec(1, n).begin(), e.vec(1, n).end());
    }
    const std::vector<double> w(e.vec(0, cell[0]).begin(), e.vec(0, cell[0]).end());
    const std::vector<double> c(e.vec(1, cell[1]).begin(), e.vec(1, cell[1]).end());
    worst = std::max(worst, std::abs(NsLossAndGrads(e, cell, negs).loss -
                                     testing::TextbookSgnsLoss(w, c, neg_vecs)));
  }
  std::ostringstream out;
  out << instances << " instances, max abs difference " << worst;
  return {worst <= 1e-12, out.str()};
}

// 5. Feature recovery: the context distribution is permuted when the binary
// feature is on; a model that sees the feature must beat one that does not.
struct RecoveryData {
  SparseCountTensor train, held_out;
};

RecoveryData MakeRecoveryData(std::uint64_t seed) {
  const std::size_t n_targets = 50, n_contexts = 50, clusters = 5;
  Rng rng(seed);
  std::vector<std::vector<double>> p0(n_targets, std::vector<double>(n_contexts));
  for (std::size_t t = 0; t < n_targets; ++t) {
    double z = 0.0;
    for (std::size_t c = 0; c < n_contexts; ++c) {
      p0[t][c] = (c % clusters == t % clusters ? 20.0 : 1.0) * rng.Uniform(0.5, 1.5);
      z += p0[t][c];
    }
    for (double& p : p0[t]) p /= z;
  }
  std::vector<std::size_t> perm(n_contexts);
  for (std::size_t c = 0; c < n_contexts; ++c) perm[c] = c;
  for (std::size_t i = n_contexts; i > 1; --i) std::swap(perm[i - 1], perm[rng.Below(i)]);

  auto vocab = [](const std::string& prefix, std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(prefix + std::to_string(i));
    return Vocabulary::FromEntries(labels, std::vector<std::int64_t>(n, 1), 1);
  };
  const ModeSchema schema({{"target", ModeRole::kTarget, vocab("t", n_targets)},
                           {"context", ModeRole::kContext, vocab("c", n_contexts)},
                           {"flag", ModeRole::kFeature, vocab("f", 2)},
                           {"sep", ModeRole::kFeature,
                            Vocabulary::FromEntries({"-2", "-1", "+1", "+2"}, {1, 1, 1, 1}, 1)}});
  TensorBuilder train(schema), held(schema);
  for (int r = 0; r < 100000; ++r) {
    const Id t = static_cast<Id>(rng.Below(n_targets));
    const Id f = static_cast<Id>(rng.Below(2));
    const Id sep = static_cast<Id>(rng.Below(4));
    double u = rng.Uniform(), acc = 0.0;
    std::size_t c = 0;
    for (; c + 1 < n_contexts; ++c) {
      acc += p0[t][c];
      if (u < acc) break;
    }
    const Id context = static_cast<Id>(f == 0 ? c : perm[c]);
    const std::vector<Id> cell = {t, context, f, sep};
    (rng.Uniform() < 0.2 ? held : train).Add(cell, 1.0);
  }
  return {train.Build(), held.Build()};
}

Outcome Criterion5() {
  const auto start = Clock::now();
  std::ostringstream out;
  int wins = 0;
  const std::vector<std::string> drop = {"flag", "sep"};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const RecoveryData data = MakeRecoveryData(100 + seed);
    TrainConfig config;
    config.dim = 10;
    config.epochs = 5;
    config.seed = seed;
    const double full = ExactLogLikelihood(data.held_out, Train(data.train, config));
    const SparseCountTensor train2 = Marginalize(data.train, drop);
    const double marginal =
        ExactLogLikelihood(Marginalize(data.held_out, drop), Train(train2, config));
    const double mass = data.held_out.TotalMass();
    if (full > marginal) ++wins;
    out << (seed > 1 ? "; " : "") << "seed " << seed << ": " << text::FormatFixed(full / mass, 4)
        << " vs " << text::FormatFixed(marginal / mass, 4);
  }
  const double secs = Seconds(start);
  out << " (held-out loglik per record, 4-mode vs 2-mode), " << wins << "/5, "
      << text::FormatFixed(secs, 1) << " s";
  return {wins == 5 && secs < 120.0, out.str()};
}

// 6. QVEC-CCA self-correlation, rotation invariance and the 1-d case.
Outcome Criterion6() {
  Rng rng(66);
  auto gaussian = [&](std::size_t rows, std::size_t cols, double sd) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = sd * rng.Normal();
    }
    return m;
  };
  const Eigen::MatrixXd x = gaussian(200, 20, 1.0);
  const double self_err = std::abs(QvecCca(x, x) - 1.0);
  const Eigen::MatrixXd s = gaussian(200, 80, 1.0) + 0.3 * (x * gaussian(20, 80, 1.0));
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(20, 20, 1.0));
  const Eigen::MatrixXd q = qr.householderQ();
  const double rot_err = std::abs(QvecCca(x * q, s) - QvecCca(x, s));
  double pearson_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 10 + rng.Below(90);
    const Eigen::MatrixXd a = gaussian(n, 1, 100.0);
    const Eigen::MatrixXd b = gaussian(n, 1, 100.0) + rng.Uniform(-2, 2) * a;
    const std::vector<double> va(a.data(), a.data() + n), vb(b.data(), b.data() + n);
    pearson_err = std::max(pearson_err, std::abs(QvecCca(a, b) - std::abs(testing::Pearson(va, vb))));
  }
  std::ostringstream out;
  out << "|cca(X,X)-1| " << self_err << ", rotation " << rot_err << ", 1-d vs |r| "
      << pearson_err;
  return {self_err <= 1e-6 && rot_err <= 1e-6 && pearson_err <= 1e-10, out.str()};
}

// 7. The hand-computed "eat" oracle and L1 norms on a 500-judgment file.
Outcome Criterion7() {
  auto j = [](std::string_view prop, bool applicable, double likelihood) {
    return SprJudgment{"eat", "food", Relation::kNsubj, *PropertyIndex(prop), applicable,
                       likelihood};
  };
  const std::vector<SprJudgment> eat = {j("volition", true, 5), j("awareness", true, 3),
                                        j("change_of_state", false, 4)};
  const OracleVector v = BuildOracle(eat).vectors.at("eat");
  bool exact = true;
  for (std::size_t i = 0; i < kOracleDim; ++i) {
    double want = 0.0;
    if (i == OracleComponent(*PropertyIndex("volition"), Relation::kNsubj)) want = 5.0 / 8;
    if (i == OracleComponent(*PropertyIndex("awareness"), Relation::kNsubj)) want = 3.0 / 8;
    exact = exact && v[i] == want;
  }

  const std::string dir = testing::TempDir("accept7");
  {
    std::ostringstream tsv;
    WriteSprJudgments(MakeSyntheticSpr(80, 500, 7), tsv);
    text::WriteFile(dir + "/spr.tsv", tsv.str());
  }
  const OracleTable table = BuildOracle(ReadSprJudgments(dir + "/spr.tsv"));
  double worst = 0.0;
  for (const auto& [word, vec] : table.vectors) {
    double l1 = 0.0;
    for (double x : vec) l1 += x;
    worst = std::max(worst, std::abs(l1 - 1.0));
  }
  fs::remove_all(dir);
  std::ostringstream out;
  out << "eat vector " << (exact ? "exact" : "WRONG") << "; " << table.vectors.size()
      << " oracle vectors, max |L1-1| " << worst;
  return {exact && worst <= 1e-12 && !table.vectors.empty(), out.str()};
}

// 8. Golden records of the tactic sentence and signed/unsigned window agreement.
Outcome Criterion8() {
  const std::vector<AnnotatedSentence> tactic = {testing::TacticSentence()};
  const SparseCountTensor frames =
      ExtractFrames(tactic, BuildVocab(tactic, TokenSelector::kTriggerHeads, 1));
  const std::string nf(kNoFrame), nr(kNoRole);
  const std::map<std::vector<std::string>, double> want = {
      {{"try", "Bill", "-2", "Attempt", "Agent", nf, nr, nf, nr}, 1.0},
      {{"try", "the", "+1", "Attempt", "Goal", nf, nr, nf, nr}, 1.0},
      {{"try", "same", "+2", "Attempt", "Goal", nf, nr, nf, nr}, 1.0},
      {{"try", "tactic", "+3", "Attempt", "Goal", nf, nr, nf, nr}, 1.0},
  };
  const bool golden = testing::LabeledCells(frames) == want;

  Rng rng(88);
  std::vector<AnnotatedSentence> random;
  for (int i = 0; i < 100; ++i) {
    AnnotatedSentence s;
    s.doc_id = "r" + std::to_string(i);
    const std::size_t len = 1 + rng.Below(15);
    for (std::size_t t = 0; t < len; ++t) s.tokens.push_back("w" + std::to_string(rng.Below(12)));
    random.push_back(s);
  }
  const Vocabulary vocab = BuildVocab(random, TokenSelector::kAllTokens, 2);
  bool agree = true;
  for (int window : {1, 2, 3}) {
    WindowOptions u, s;
    u.window = s.window = window;
    s.signed_offsets = true;
    const std::vector<std::string> drop = {"sep"};
    agree = agree && Marginalize(ExtractWindowed(random, vocab, s), drop) ==
                         ExtractWindowed(random, vocab, u);
  }
  std::ostringstream out;
  out << "tactic sentence records " << (golden ? "match" : "DIFFER") << " (" << frames.nnz()
      << " cells); signed marginal " << (agree ? "equals" : "DIFFERS FROM")
      << " unsigned on 100 sentences";
  return {golden && agree, out.str()};
}

// 9. End-to-end pipeline twice with one seed; every output byte-identical.
std::map<std::string, std::string> Snapshot(const std::string& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[fs::relative(entry.path(), dir).string()] = text::ReadFile(entry.path().string());
    }
  }
  return files;
}

void RunPipeline(const std::string& dir) {
  PipelineConfig base;
  base.corpus = {dir + "/corpus.jsonl"};
  base.threshold = 2;
  base.train.dim = 25;
  base.train.min_count = 2;
  base.train.epochs = 5;
  base.spr = dir + "/spr.tsv";

  auto extract = [&](const std::string& kind, const std::string& name) {
    PipelineConfig c = base;
    c.kind = kind;
    c.out = dir + "/" + name;
    RunExtract(c);
    return c.out + "/tensor.tsv";
  };
  auto train = [&](const std::string& tensor, std::vector<std::string> features,
                   const std::string& name) {
    PipelineConfig c = base;
    c.tensor = tensor;
    c.features = std::move(features);
    c.out = dir + "/" + name;
    RunTrain(c);
    return c.out;
  };
  const std::string w2v = train(extract("window", "x_window"), {}, "w2v");
  const std::string t3 = train(extract("window_signed", "x_signed"), {"sep"}, "3tensor");
  const std::string model = train(extract("frames", "x_frames"), {"sep"}, "frames_sep");
  PipelineConfig eval = base;
  eval.baseline_w2v = w2v;
  eval.baseline_3tensor = t3;
  eval.out = dir + "/eval";
  for (const std::string& m : {model, w2v, t3}) {
    eval.embeddings = m;
    RunEval(eval);
  }
  PipelineConfig report = base;
  report.reports = {dir + "/eval/report.tsv"};
  report.out = dir + "/report";
  std::ostringstream table;
  RunReport(report, table);
}

Outcome Criterion9() {
  const auto start = Clock::now();
  const std::string dir = testing::TempDir("accept9");
  SyntheticCorpusOptions options;
  options.sentences = 500;
  std::string lines;
  for (const auto& s : MakeSyntheticCorpus(options)) lines += SerializeSentence(s) + "\n";
  text::WriteFile(dir + "/corpus.jsonl", lines);
  std::ostringstream spr;
  WriteSprJudgments(MakeSyntheticSpr(options.predicates, 2000, 9), spr);
  text::WriteFile(dir + "/spr.tsv", spr.str());

  RunPipeline(dir);
  const auto first = Snapshot(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) fs::remove_all(entry.path());
  }
  RunPipeline(dir);
  const auto second = Snapshot(dir);
  const double secs = Seconds(start);

  std::size_t differing = 0;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) ++differing;
  }
  const bool has_csv = first.count("report/deltas.csv") > 0;
  fs::remove_all(dir);
  std::ostringstream out;
  out << first.size() << " output files, " << differing << " differ between runs; CSV "
      << (has_csv ? "written" : "MISSING") << "; " << text::FormatFixed(secs, 1)
      << " s for both runs";
  return {differing == 0 && first.size() == second.size() && has_csv && secs / 2 < 120.0,
          out.str()};
}

}  // namespace
}  // namespace semtensor

int main() {
  const std::vector<std::function<semtensor::Outcome()>> criteria = {
      semtensor::Criterion1, semtensor::Criterion2, semtensor::Criterion3,
      semtensor::Criterion4, semtensor::Criterion5, semtensor::Criterion6,
      semtensor::Criterion7, semtensor::Criterion8, semtensor::Criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    semtensor::Outcome outcome;
    try {
      outcome = criteria[i]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::cout << "criterion " << i + 1 << ": " << (outcome.pass ? "PASS" : "FAIL") << "  "
              << outcome.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}

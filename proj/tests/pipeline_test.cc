#include "semtensor/pipeline.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "semtensor/corpus.h"
#include "semtensor/error.h"
#include "semtensor/synthetic.h"
#include "semtensor/tensor_io.h"
#include "semtensor/text_util.h"
#include "support/oracles.h"

namespace semtensor {
namespace {

namespace fs = std::filesystem;

std::string WriteCorpus(const std::string& dir, const std::vector<AnnotatedSentence>& sentences) {
  std::string lines;
  for (const auto& s : sentences) lines += SerializeSentence(s) + "\n";
  const std::string path = dir + "/corpus.jsonl";
  text::WriteFile(path, lines);
  return path;
}

TEST(PipelineConfig, SetEchoAndReload) {
  PipelineConfig c;
  c.Set("corpus", "a.jsonl, b.jsonl");
  c.Set("T", "3");
  c.Set("features", "sep,pb");
  c.Set("dim", "25");
  c.Set("eta0", "0.05");
  c.Set("norm", "l2");
  EXPECT_EQ(c.corpus, (std::vector<std::string>{"a.jsonl", "b.jsonl"}));
  EXPECT_EQ(c.threshold, 3);
  EXPECT_EQ(c.train.dim, 25u);

  const std::string dir = testing::TempDir("cfg");
  text::WriteFile(dir + "/run.config", c.Echo());
  PipelineConfig d;
  d.LoadFile(dir + "/run.config");
  EXPECT_EQ(d.Echo(), c.Echo());

  c.Set("features", "none");
  EXPECT_TRUE(c.features.empty());
  for (auto [k, v] : std::vector<std::pair<std::string, std::string>>{
           {"bogus", "1"}, {"dim", "x"}, {"kind", "grid"}, {"predict", "sep"}, {"norm", "l3"}}) {
    try {
      c.Set(k, v);
      FAIL() << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.category(), ErrorCategory::kConfig);
    }
  }
  text::WriteFile(dir + "/bad.config", "dim 3\n");
  EXPECT_THROW(d.LoadFile(dir + "/bad.config"), Error);
}

TEST(Pipeline, ExtractTacticSentence) {
  const std::string dir = testing::TempDir("pipe");
  PipelineConfig c;
  c.corpus = {WriteCorpus(dir, {testing::TacticSentence()})};
  c.threshold = 1;
  c.kind = "window";
  c.out = dir + "/window";
  RunExtract(c);
  const SparseCountTensor w = LoadTensor(c.out + "/tensor.tsv");
  EXPECT_EQ(w.arity(), 2u);
  // Ordered pairs within distance 2 over 9 tokens: 2 * (8 + 7).
  EXPECT_EQ(w.TotalMass(), 30.0);
  EXPECT_TRUE(fs::exists(c.out + "/extract.config"));

  c.kind = "frames";
  c.collapse = false;
  c.out = dir + "/frames";
  RunExtract(c);
  const SparseCountTensor f = LoadTensor(c.out + "/tensor.tsv");
  EXPECT_EQ(f.arity(), 9u);
  EXPECT_EQ(f.nnz(), 4u);

  // Stats rows agree with the saved vocabularies.
  std::istringstream stats(text::ReadFile(c.out + "/stats.tsv"));
  std::string line;
  std::getline(stats, line);
  for (std::size_t m = 0; std::getline(stats, line); ++m) {
    const auto fields = text::Split(line, '\t');
    EXPECT_EQ(std::string(fields[2]), std::to_string(f.schema().mode(m).vocab.size()));
  }
}

TEST(Pipeline, EmptyExtractionStillWritesTensor) {
  const std::string dir = testing::TempDir("pipe");
  PipelineConfig c;
  c.corpus = {WriteCorpus(dir, {testing::TacticSentence()})};
  c.threshold = 50;
  c.out = dir + "/out";
  RunExtract(c);
  EXPECT_TRUE(LoadTensor(c.out + "/tensor.tsv").empty());
}

class PipelineRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::TempDir("run");
    SyntheticCorpusOptions o;
    o.sentences = 400;
    o.predicates = 30;
    base_.corpus = {WriteCorpus(dir_, MakeSyntheticCorpus(o))};
    text::WriteFile(dir_ + "/spr.tsv", "");
    {
      std::ostringstream spr;
      WriteSprJudgments(MakeSyntheticSpr(30, 1500, 3), spr);
      text::WriteFile(dir_ + "/spr.tsv", spr.str());
    }
    base_.threshold = 2;
    base_.train.dim = 6;
    base_.train.epochs = 2;
    base_.train.min_count = 2;
  }

  std::string Train(const std::string& tensor, const std::string& name,
                    std::vector<std::string> features, const std::string& predict = "filler") {
    PipelineConfig c = base_;
    c.tensor = tensor;
    c.features = std::move(features);
    c.predict = predict;
    c.out = dir_ + "/" + name;
    RunTrain(c);
    return c.out;
  }

  std::string Extract(const std::string& kind, const std::string& name) {
    PipelineConfig c = base_;
    c.kind = kind;
    c.out = dir_ + "/" + name;
    RunExtract(c);
    return c.out + "/tensor.tsv";
  }

  std::string dir_;
  PipelineConfig base_;
};

TEST_F(PipelineRun, TrainDeterministicAndManifest) {
  const std::string frames = Extract("frames", "frames");
  const std::string a = Train(frames, "a", {"sep", "fn-role"});
  const std::string b = Train(frames, "b", {"sep", "fn-role"});
  for (const char* file : {"trigger.vec", "filler.vec", "sep.vec", "fn-role.vec"}) {
    EXPECT_EQ(text::ReadFile(a + "/" + file), text::ReadFile(b + "/" + file)) << file;
  }
  const ModelManifest m = ReadManifest(a);
  EXPECT_EQ(m.model_id, "a");
  EXPECT_EQ(m.ablation, "sep+fn-role");
  EXPECT_EQ(m.target_mode, "trigger");
  EXPECT_EQ(m.entries.at("mode.trigger"), ReadManifest(b).entries.at("mode.trigger"));
  EXPECT_EQ(text::ReadFile(a + "/manifest.txt").find(dir_), std::string::npos);

  // The config echo alone reproduces the run.
  PipelineConfig echo;
  echo.LoadFile(a + "/train.config");
  echo.out = dir_ + "/c";
  echo.model_id = "a";
  RunTrain(echo);
  EXPECT_EQ(text::ReadFile(a + "/manifest.txt"), text::ReadFile(echo.out + "/manifest.txt"));
}

TEST_F(PipelineRun, AblationErrors) {
  const std::string frames = Extract("frames", "frames");
  try {
    Train(frames, "x", {"bogus"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("fn-frame(feature)"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Train(frames, "x", {"filler"}), Error);
  const std::string window = Extract("window_signed", "ws");
  EXPECT_THROW(Train(window, "x", {}, "pb"), Error);
  const std::string pb = Train(frames, "pbmodel", {"filler", "sep"}, "pb");
  EXPECT_EQ(ReadManifest(pb).entries.at("context_mode"), "pb");
}

TEST_F(PipelineRun, EvalKnnReport) {
  const std::string w2v = Train(Extract("window", "w"), "w2v", {});
  const std::string t3 = Train(Extract("window_signed", "ws"), "t3", {"sep"});
  const std::string model = Train(Extract("frames", "frames"), "model", {"sep"});
  PipelineConfig c = base_;
  c.embeddings = model;
  c.baseline_w2v = w2v;
  c.baseline_3tensor = w2v;
  c.spr = dir_ + "/spr.tsv";
  c.out = dir_ + "/eval";
  RunEval(c);
  c.embeddings = w2v;
  RunEval(c);
  std::istringstream in(text::ReadFile(c.out + "/report.tsv"));
  const auto rows = ParseReport(in);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].model_id, "w2v");
  EXPECT_EQ(rows[1].delta_w2v_pct, 0.0);
  const std::string first = text::ReadFile(c.out + "/report.tsv");
  RunEval(c);
  EXPECT_EQ(text::ReadFile(c.out + "/report.tsv"), first);
  const std::string csv = text::ReadFile(c.out + "/deltas.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4);
  EXPECT_NE(text::ReadFile(c.out + "/eval_meta.txt").find("oracle_norm = l1"), std::string::npos);

  PipelineConfig k = base_;
  k.embeddings = model;
  k.words = {SyntheticPredicate(1), SyntheticPredicate(2)};
  k.k = 3;
  std::ostringstream knn;
  RunKnn(k, knn);
  const std::string knn_text = knn.str();
  EXPECT_EQ(std::count(knn_text.begin(), knn_text.end(), '\n'), 1 + 6);

  PipelineConfig r = base_;
  r.reports = {c.out + "/report.tsv"};
  r.out = dir_ + "/merged";
  std::ostringstream table;
  RunReport(r, table);
  EXPECT_EQ(text::ReadFile(r.out + "/report.tsv"), first);
  EXPECT_NE(table.str().find("model"), std::string::npos);

  PipelineConfig missing = c;
  missing.baseline_3tensor.clear();
  EXPECT_THROW(RunEval(missing), Error);
  (void)t3;
}

}  // namespace
}  // namespace semtensor

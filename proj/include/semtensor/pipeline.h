#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "semtensor/factorizer.h"
#include "semtensor/report.h"
#include "semtensor/spr.h"

namespace semtensor {

// Flat key-value run configuration. Every key can come from a config file
// ("key = value", '#' comments) and be overridden by a "--key value" flag.
struct PipelineConfig {
  std::vector<std::string> corpus;
  std::string kind = "frames";  // window | window_signed | frames
  std::int64_t threshold = 100;  // T
  int window = 2;
  bool collapse = true;
  std::vector<std::string> features;  // FEATURE modes kept for training
  std::string predict = "filler";     // filler | pb
  TrainConfig train;
  std::string tensor;      // train input
  std::string embeddings;  // model directory (eval, knn)
  std::string baseline_w2v;
  std::string baseline_3tensor;
  std::string spr;
  std::string model_id;
  std::string report;                // eval output; defaults to <out>/report.tsv
  std::vector<std::string> reports;  // report inputs
  std::vector<std::string> words;    // knn queries
  std::size_t k = 10;
  OracleNorm norm = OracleNorm::kL1;
  std::string out = "out";

  // Throws a config error for unknown keys or unparsable values.
  void Set(std::string_view key, std::string_view value);
  void LoadFile(const std::string& path);

  // All keys in a fixed order, loadable by LoadFile.
  std::string Echo() const;

  static const std::vector<std::string>& Keys();
};

// "none" for an empty feature set, else names joined with '+'.
std::string AblationName(const std::vector<std::string>& features);

struct ModelManifest {
  std::string model_id;
  std::string ablation;
  std::string predict;
  std::string target_mode;
  std::map<std::string, std::string> entries;
};

ModelManifest ReadManifest(const std::string& model_dir);
WordVectors LoadTargetVectors(const std::string& model_dir);

// Subcommands. Each writes its outputs under config.out (or the named files)
// together with an echo of the resolved configuration.
void RunExtract(const PipelineConfig& config);
void RunTrain(const PipelineConfig& config);
void RunEval(const PipelineConfig& config);
void RunKnn(const PipelineConfig& config, std::ostream& out);
void RunReport(const PipelineConfig& config, std::ostream& out);

}  // namespace semtensor

#include "semtensor/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "semtensor/corpus.h"
#include "semtensor/error.h"
#include "semtensor/extract.h"
#include "semtensor/knn.h"
#include "semtensor/qvec.h"
#include "semtensor/tensor_io.h"
#include "semtensor/tensor_ops.h"
#include "semtensor/text_util.h"

namespace fs = std::filesystem;

namespace semtensor {

namespace {

struct KeyDef {
  std::string name;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

[[noreturn]] void BadValue(std::string_view key, std::string_view value) {
  throw Error(ErrorCategory::kConfig,
              "bad value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

std::vector<std::string> ParseList(std::string_view value) {
  std::vector<std::string> out;
  for (auto part : text::Split(value, ',')) {
    part = text::Trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

std::string JoinList(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

KeyDef StringKey(std::string name, std::string PipelineConfig::*field) {
  return {name, [field](PipelineConfig& c, std::string_view v) { c.*field = std::string(v); },
          [field](const PipelineConfig& c) { return c.*field; }};
}

KeyDef ListKey(std::string name, std::vector<std::string> PipelineConfig::*field) {
  return {name, [field](PipelineConfig& c, std::string_view v) { c.*field = ParseList(v); },
          [field](const PipelineConfig& c) { return JoinList(c.*field); }};
}

template <typename T, typename Owner>
KeyDef IntKey(std::string name, std::function<T&(Owner&)> ref) {
  return {name,
          [name, ref](PipelineConfig& c, std::string_view v) {
            std::int64_t x;
            if (!text::ParseInt(v, &x)) BadValue(name, v);
            ref(c) = static_cast<T>(x);
          },
          [ref](const PipelineConfig& c) {
            return std::to_string(ref(const_cast<PipelineConfig&>(c)));
          }};
}

KeyDef DoubleKey(std::string name, double TrainConfig::*field) {
  return {name,
          [name, field](PipelineConfig& c, std::string_view v) {
            if (!text::ParseDouble(v, &(c.train.*field))) BadValue(name, v);
          },
          [field](const PipelineConfig& c) { return text::FormatDouble(c.train.*field); }};
}

const std::vector<KeyDef>& KeyTable() {
  using C = PipelineConfig;
  static const std::vector<KeyDef> table = [] {
    std::vector<KeyDef> t;
    t.push_back(ListKey("corpus", &C::corpus));
    t.push_back({"kind",
                 [](C& c, std::string_view v) {
                   if (v != "window" && v != "window_signed" && v != "frames") BadValue("kind", v);
                   c.kind = std::string(v);
                 },
                 [](const C& c) { return c.kind; }});
    t.push_back(IntKey<std::int64_t, C>("threshold", [](C& c) -> std::int64_t& { return c.threshold; }));
    t.push_back(IntKey<int, C>("window", [](C& c) -> int& { return c.window; }));
    t.push_back({"collapse",
                 [](C& c, std::string_view v) {
                   if (!text::ParseBool(v, &c.collapse)) BadValue("collapse", v);
                 },
                 [](const C& c) { return std::string(c.collapse ? "true" : "false"); }});
    t.push_back({"features",
                 [](C& c, std::string_view v) {
                   c.features = ParseList(v);
                   if (c.features.size() == 1 && c.features[0] == "none") c.features.clear();
                 },
                 [](const C& c) { return c.features.empty() ? "none" : JoinList(c.features); }});
    t.push_back({"predict",
                 [](C& c, std::string_view v) {
                   if (v != "filler" && v != "pb") BadValue("predict", v);
                   c.predict = std::string(v);
                 },
                 [](const C& c) { return c.predict; }});
    t.push_back(IntKey<std::size_t, C>("dim", [](C& c) -> std::size_t& { return c.train.dim; }));
    t.push_back(IntKey<int, C>("negatives", [](C& c) -> int& { return c.train.negatives; }));
    t.push_back(IntKey<int, C>("epochs", [](C& c) -> int& { return c.train.epochs; }));
    t.push_back(DoubleKey("eta0", &TrainConfig::eta0));
    t.push_back(DoubleKey("gamma", &TrainConfig::gamma));
    t.push_back(DoubleKey("max_weight", &TrainConfig::max_weight));
    t.push_back(IntKey<std::uint64_t, C>("seed", [](C& c) -> std::uint64_t& { return c.train.seed; }));
    t.push_back(IntKey<std::int64_t, C>("min_count", [](C& c) -> std::int64_t& { return c.train.min_count; }));
    t.push_back(IntKey<int, C>("threads", [](C& c) -> int& { return c.train.num_threads; }));
    t.push_back(StringKey("tensor", &C::tensor));
    t.push_back(StringKey("embeddings", &C::embeddings));
    t.push_back(StringKey("baseline_w2v", &C::baseline_w2v));
    t.push_back(StringKey("baseline_3tensor", &C::baseline_3tensor));
    t.push_back(StringKey("spr", &C::spr));
    t.push_back(StringKey("model_id", &C::model_id));
    t.push_back(StringKey("report", &C::report));
    t.push_back(ListKey("reports", &C::reports));
    t.push_back(ListKey("words", &C::words));
    t.push_back(IntKey<std::size_t, C>("k", [](C& c) -> std::size_t& { return c.k; }));
    t.push_back({"norm",
                 [](C& c, std::string_view v) {
                   if (v == "l1") c.norm = OracleNorm::kL1;
                   else if (v == "l2") c.norm = OracleNorm::kL2;
                   else BadValue("norm", v);
                 },
                 [](const C& c) { return std::string(OracleNormName(c.norm)); }});
    t.push_back(StringKey("out", &C::out));
    return t;
  }();
  return table;
}

void Log(const std::string& message) { std::cerr << "[semtensor] " << message << "\n"; }

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCategory::kIo, "cannot create directory " + dir + ": " + ec.message());
}

std::string Join(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void WriteEcho(const PipelineConfig& config, const std::string& command) {
  text::WriteFile(Join(config.out, command + ".config"),
                  "# semtensor " + command + "\n" + config.Echo());
}

std::map<std::string, std::string> ReadKeyValues(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::kIo, "cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = text::Trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCategory::kConfig,
                  path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    out[std::string(text::Trim(view.substr(0, eq)))] = std::string(text::Trim(view.substr(eq + 1)));
  }
  return out;
}

}  // namespace

void PipelineConfig::Set(std::string_view key, std::string_view value) {
  if (key == "T") key = "threshold";
  for (const auto& def : KeyTable()) {
    if (def.name == key) {
      def.set(*this, text::Trim(value));
      return;
    }
  }
  throw Error(ErrorCategory::kConfig, "unknown config key '" + std::string(key) + "'");
}

void PipelineConfig::LoadFile(const std::string& path) {
  for (const auto& [key, value] : ReadKeyValues(path)) Set(key, value);
}

std::string PipelineConfig::Echo() const {
  std::string out;
  for (const auto& def : KeyTable()) out += def.name + " = " + def.get(*this) + "\n";
  return out;
}

const std::vector<std::string>& PipelineConfig::Keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& def : KeyTable()) k.push_back(def.name);
    return k;
  }();
  return keys;
}

std::string AblationName(const std::vector<std::string>& features) {
  if (features.empty()) return "none";
  std::string out;
  for (const auto& f : features) out += (out.empty() ? "" : "+") + f;
  return out;
}

ModelManifest ReadManifest(const std::string& model_dir) {
  ModelManifest m;
  m.entries = ReadKeyValues(Join(model_dir, "manifest.txt"));
  auto need = [&](const std::string& key) {
    const auto it = m.entries.find(key);
    if (it == m.entries.end()) {
      throw Error(ErrorCategory::kFormat, "manifest in " + model_dir + " lacks '" + key + "'");
    }
    return it->second;
  };
  if (need("format") != "semtensor-manifest 1") {
    throw Error(ErrorCategory::kFormat, "unsupported manifest format in " + model_dir);
  }
  m.model_id = need("model_id");
  m.ablation = need("ablation");
  m.predict = need("predict");
  m.target_mode = need("target_mode");
  return m;
}

WordVectors LoadTargetVectors(const std::string& model_dir) {
  const auto manifest = ReadManifest(model_dir);
  return ReadWordVectors(Join(model_dir, manifest.target_mode + ".vec"));
}

void RunExtract(const PipelineConfig& config) {
  if (config.corpus.empty()) throw Error(ErrorCategory::kConfig, "extract needs 'corpus'");
  const Corpus corpus = ReadCorpora(config.corpus);
  EnsureDir(config.out);
  std::ostringstream counters;
  counters << "sentences\t" << corpus.sentences.size() << "\n";
  counters << "skipped_lines\t" << corpus.skipped_lines << "\n";

  SparseCountTensor tensor;
  if (config.kind == "window" || config.kind == "window_signed") {
    const Vocabulary vocab = BuildVocab(corpus.sentences, TokenSelector::kAllTokens, config.threshold);
    WindowOptions opts;
    opts.window = config.window;
    opts.signed_offsets = config.kind == "window_signed";
    opts.num_threads = config.train.num_threads;
    tensor = ExtractWindowed(corpus.sentences, vocab, opts);
  } else {
    const Vocabulary triggers =
        BuildVocab(corpus.sentences, TokenSelector::kTriggerHeads, config.threshold);
    FrameExtractionStats stats;
    tensor = ExtractFrames(corpus.sentences, triggers, &stats, config.train.num_threads);
    counters << "frame_records\t" << stats.records << "\n"
             << "frame_triples\t" << stats.triples << "\n"
             << "roleless_annotations\t" << stats.roleless_annotations << "\n"
             << "skipped_out_of_vocab\t" << stats.skipped_out_of_vocab << "\n"
             << "multi_parser_pairs\t" << stats.multi_parser_pairs << "\n";
    if (stats.skipped_out_of_vocab > 0) {
      Log(std::to_string(stats.skipped_out_of_vocab) + " frame records skipped: trigger below T");
    }
    if (config.collapse) {
      CollapseStats cs;
      tensor = CollapseFrames(tensor, &cs);
      counters << "dual_fn_cells\t" << cs.dual_fn_cells << "\n"
               << "dual_fn_duplicated_mass\t" << text::FormatDouble(cs.duplicated_mass) << "\n";
      Log("collapse: " + std::to_string(cs.dual_fn_cells) +
          " cells asserted by both FrameNet parsers, duplicated mass " +
          text::FormatDouble(cs.duplicated_mass));
    }
  }
  if (tensor.empty()) Log("warning: extraction produced an empty tensor");
  SaveTensor(tensor, Join(config.out, "tensor.tsv"));
  std::ostringstream stats;
  WriteTensorStats(tensor, stats);
  text::WriteFile(Join(config.out, "stats.tsv"), stats.str());
  counters << "total_mass\t" << text::FormatDouble(tensor.TotalMass()) << "\n";
  text::WriteFile(Join(config.out, "counters.tsv"), counters.str());
  WriteEcho(config, "extract");
  Log("extract: " + tensor.schema().Describe() + ", " + std::to_string(tensor.nnz()) +
      " cells, mass " + text::FormatDouble(tensor.TotalMass()));
}

void RunTrain(const PipelineConfig& config) {
  if (config.tensor.empty()) throw Error(ErrorCategory::kConfig, "train needs 'tensor'");
  config.train.Validate();
  SparseCountTensor tensor = LoadTensor(config.tensor);
  if (config.collapse && IsFrameSchema(tensor.schema())) tensor = CollapseFrames(tensor);
  if (config.predict == "pb") {
    tensor = SetContextMode(tensor, kPbMode);
  }
  const std::string context_name = tensor.schema().mode(tensor.schema().context_index()).name;
  if (std::find(config.features.begin(), config.features.end(), context_name) !=
      config.features.end()) {
    throw Error(ErrorCategory::kConfig, "feature set may not contain the predicted mode '" +
                                            context_name + "'");
  }
  tensor = KeepFeatures(tensor, config.features);
  tensor = PruneRare(tensor, config.train.min_count);
  if (tensor.empty()) {
    throw Error(ErrorCategory::kConfig,
                "no cells left after min_count=" + std::to_string(config.train.min_count));
  }
  Log("train: " + tensor.schema().Describe() + ", " + std::to_string(tensor.nnz()) + " cells");
  TrainStats stats;
  const EmbeddingSet emb = Train(tensor, config.train, &stats);

  EnsureDir(config.out);
  const ModeSchema& schema = emb.schema();
  const std::string model_id =
      config.model_id.empty() ? fs::path(config.out).filename().string() : config.model_id;
  std::ostringstream manifest;
  manifest << "format = semtensor-manifest 1\n"
           << "model_id = " << model_id << "\n"
           << "ablation = " << AblationName(config.features) << "\n"
           << "predict = " << config.predict << "\n"
           << "target_mode = " << schema.mode(schema.target_index()).name << "\n"
           << "context_mode = " << context_name << "\n";
  for (std::size_t m = 0; m < schema.size(); ++m) {
    const std::string file = schema.mode(m).name + ".vec";
    const std::string contents = FormatWordVectors(ModeVectors(emb, m));
    text::WriteFile(Join(config.out, file), contents);
    manifest << "mode." << schema.mode(m).name << " = " << RoleName(schema.mode(m).role) << " "
             << schema.mode(m).vocab.size() << " " << file << " "
             << text::Hex64(text::Fnv1a64(contents)) << "\n";
  }
  manifest << "dim = " << config.train.dim << "\n"
           << "negatives = " << config.train.negatives << "\n"
           << "epochs = " << config.train.epochs << "\n"
           << "eta0 = " << text::FormatDouble(config.train.eta0) << "\n"
           << "gamma = " << text::FormatDouble(config.train.gamma) << "\n"
           << "max_weight = " << text::FormatDouble(config.train.max_weight) << "\n"
           << "seed = " << config.train.seed << "\n"
           << "min_count = " << config.train.min_count << "\n"
           << "threads = " << config.train.num_threads << "\n"
           << "cells = " << tensor.nnz() << "\n"
           << "mass = " << text::FormatDouble(tensor.TotalMass()) << "\n";
  text::WriteFile(Join(config.out, "manifest.txt"), manifest.str());

  std::ostringstream loss;
  loss << "epoch\tmean_cell_loss\tweighted_loss\n";
  for (std::size_t e = 0; e < stats.epoch_mean_loss.size(); ++e) {
    loss << e + 1 << '\t' << text::FormatDouble(stats.epoch_mean_loss[e]) << '\t'
         << text::FormatDouble(stats.epoch_weighted_loss[e]) << '\n';
  }
  text::WriteFile(Join(config.out, "train_stats.tsv"), loss.str());
  WriteEcho(config, "train");
}

void RunEval(const PipelineConfig& config) {
  if (config.embeddings.empty()) throw Error(ErrorCategory::kConfig, "eval needs 'embeddings'");
  if (config.baseline_w2v.empty() || config.baseline_3tensor.empty()) {
    throw Error(ErrorCategory::kConfig, "eval needs 'baseline_w2v' and 'baseline_3tensor'");
  }
  if (config.spr.empty()) throw Error(ErrorCategory::kConfig, "eval needs 'spr'");
  const ModelManifest manifest = ReadManifest(config.embeddings);
  const WordVectors model = LoadTargetVectors(config.embeddings);
  const WordVectors w2v = LoadTargetVectors(config.baseline_w2v);
  const WordVectors t3 = LoadTargetVectors(config.baseline_3tensor);
  const OracleTable oracle = BuildOracle(ReadSprJudgments(config.spr), config.norm);
  if (oracle.excluded > 0) {
    Log(std::to_string(oracle.excluded) + " predicates excluded: no applicable judgments");
  }
  const std::string model_id = config.model_id.empty() ? manifest.model_id : config.model_id;
  const EvalReport row = Evaluate(model_id, manifest.ablation, model, w2v, t3, oracle);

  if (row.overlap_n <= model.vectors.cols() + kOracleDim) {
    Log("warning: overlap of " + std::to_string(row.overlap_n) +
        " words does not exceed d + 80 columns; canonical correlations saturate near 1");
  }

  EnsureDir(config.out);
  const std::string report_path =
      config.report.empty() ? Join(config.out, "report.tsv") : config.report;
  std::vector<EvalReport> rows;
  if (fs::exists(report_path)) {
    std::ifstream in(report_path);
    rows = ParseReport(in);
  }
  UpsertReport(rows, row);
  std::ostringstream report, csv, oracle_out, meta;
  WriteReport(rows, report);
  WriteDeltaCsv(rows, csv);
  text::WriteFile(report_path, report.str());
  text::WriteFile((fs::path(report_path).parent_path() / "deltas.csv").string(), csv.str());
  WriteOracle(oracle, oracle_out);
  text::WriteFile(Join(config.out, "oracle.tsv"), oracle_out.str());
  meta << "oracle_norm = " << OracleNormName(config.norm) << "\n"
       << "canonical_correlations = first\n"
       << "cca_ridge = " << text::FormatDouble(kCcaRidge) << "\n"
       << "embedding_mode = target\n"
       << "overlap_match = lowercased exact\n"
       << "oracle_predicates = " << oracle.vectors.size() << "\n"
       << "oracle_excluded = " << oracle.excluded << "\n"
       << "overlap_n = " << row.overlap_n << "\n";
  text::WriteFile(Join(config.out, "eval_meta.txt"), meta.str());
  WriteEcho(config, "eval");
  Log("eval " + model_id + ": qvec " + text::FormatFixed(row.qvec, 6) + " on " +
      std::to_string(row.overlap_n) + " words");
}

void RunKnn(const PipelineConfig& config, std::ostream& out) {
  if (config.embeddings.empty()) throw Error(ErrorCategory::kConfig, "knn needs 'embeddings'");
  if (config.words.empty()) throw Error(ErrorCategory::kConfig, "knn needs 'words'");
  const WordVectors vectors = LoadTargetVectors(config.embeddings);
  out << "query\trank\tneighbor\tcosine\n";
  for (const auto& word : config.words) {
    const auto neighbors = NearestNeighbors(vectors, word, config.k);
    for (std::size_t r = 0; r < neighbors.size(); ++r) {
      out << word << '\t' << r + 1 << '\t' << neighbors[r].word << '\t'
          << text::FormatFixed(neighbors[r].similarity, 6) << '\n';
    }
  }
}

void RunReport(const PipelineConfig& config, std::ostream& out) {
  if (config.reports.empty()) throw Error(ErrorCategory::kConfig, "report needs 'reports'");
  std::vector<EvalReport> rows;
  for (const auto& path : config.reports) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open report " + path);
    for (const auto& r : ParseReport(in)) UpsertReport(rows, r);
  }
  EnsureDir(config.out);
  std::ostringstream report, csv;
  WriteReport(rows, report);
  WriteDeltaCsv(rows, csv);
  text::WriteFile(Join(config.out, "report.tsv"), report.str());
  text::WriteFile(Join(config.out, "deltas.csv"), csv.str());
  WriteEcho(config, "report");

  std::size_t width = 8;
  for (const auto& r : rows) width = std::max(width, r.model_id.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  out << pad("model", width) << "  " << pad("ablation", 16) << "  qvec      n     vs w2v    vs 3tensor\n";
  for (const auto& r : rows) {
    out << pad(r.model_id, width) << "  " << pad(r.ablation, 16) << "  "
        << text::FormatFixed(r.qvec, 4) << "  " << pad(std::to_string(r.overlap_n), 5) << " "
        << pad(text::FormatFixed(r.delta_w2v_pct, 2) + "%", 9) << " "
        << text::FormatFixed(r.delta_3tensor_pct, 2) << "%\n";
  }
}

}  // namespace semtensor

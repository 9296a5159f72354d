// Writes a generated annotated corpus (JSON lines) and, optionally, a
// matching SPR judgment file. Used by the smoke tests and the README demo.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "semtensor/corpus.h"
#include "semtensor/error.h"
#include "semtensor/synthetic.h"
#include "semtensor/text_util.h"

int main(int argc, char** argv) {
  CLI::App app{"make_synthetic_corpus: generated parser-style corpus"};
  semtensor::SyntheticCorpusOptions options;
  std::string out_path, spr_path;
  std::size_t judgments = 2000;
  app.add_option("out", out_path, "output JSON-lines corpus")->required();
  app.add_option("--sentences", options.sentences)->capture_default_str();
  app.add_option("--predicates", options.predicates)->capture_default_str();
  app.add_option("--nouns", options.nouns)->capture_default_str();
  app.add_option("--fn_b_rate", options.fn_b_rate)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--roleless_rate", options.roleless_rate)->check(CLI::Range(0.0, 1.0))->capture_default_str();
  app.add_option("--seed", options.seed)->capture_default_str();
  app.add_option("--spr", spr_path, "also write SPR judgments here");
  app.add_option("--judgments", judgments)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    std::string lines;
    for (const auto& s : semtensor::MakeSyntheticCorpus(options)) {
      lines += semtensor::SerializeSentence(s) + "\n";
    }
    semtensor::text::WriteFile(out_path, lines);
    if (!spr_path.empty()) {
      std::ofstream out(spr_path);
      if (!out) throw semtensor::Error(semtensor::ErrorCategory::kIo, "cannot open " + spr_path);
      semtensor::WriteSprJudgments(
          semtensor::MakeSyntheticSpr(options.predicates, judgments, options.seed), out);
    }
  } catch (const semtensor::Error& e) {
    std::cerr << "error: " << semtensor::CategoryName(e.category()) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

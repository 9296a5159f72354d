// semtensor <extract|train|eval|knn|report> [--config FILE] [--key value ...]

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "semtensor/error.h"
#include "semtensor/pipeline.h"

namespace {

constexpr const char* kCommands[][2] = {
    {"extract", "annotated corpus -> count tensor"},
    {"train", "count tensor -> embeddings"},
    {"eval", "embeddings + SPR judgments -> QVEC report"},
    {"knn", "nearest neighbors of query words"},
    {"report", "merge evaluation reports"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semtensor: frame-semantic tensor embeddings"};
  app.require_subcommand(1);

  // Every pipeline key is a flag; flags override the config file.
  std::string config_file;
  std::map<std::string, std::string> values;
  for (const auto& [name, help] : kCommands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_file, "key = value file");
    for (const auto& key : semtensor::PipelineConfig::Keys()) {
      sub->add_option("--" + key, values[key]);
    }
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    semtensor::PipelineConfig config;
    if (!config_file.empty()) config.LoadFile(config_file);
    for (const auto& [key, value] : values) {
      if (app.get_subcommands().front()->count("--" + key) > 0) config.Set(key, value);
    }
    if (command == "extract") {
      semtensor::RunExtract(config);
    } else if (command == "train") {
      semtensor::RunTrain(config);
    } else if (command == "eval") {
      semtensor::RunEval(config);
    } else if (command == "knn") {
      semtensor::RunKnn(config, std::cout);
    } else {
      semtensor::RunReport(config, std::cout);
    }
  } catch (const semtensor::Error& e) {
    std::cerr << "error: " << semtensor::CategoryName(e.category()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

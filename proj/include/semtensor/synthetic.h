#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semtensor/corpus.h"
#include "semtensor/spr.h"

namespace semtensor {

// Small generated corpora with the same shape as parser output: each
// sentence has a subject, a verb trigger and an object, annotated by a
// PropBank parser and by one or both FrameNet parsers.
struct SyntheticCorpusOptions {
  std::size_t sentences = 500;
  std::size_t predicates = 40;
  std::size_t nouns = 120;
  double fn_b_rate = 0.5;     // second FrameNet parser fires
  double roleless_rate = 0.05;
  std::uint64_t seed = 7;
};

std::vector<AnnotatedSentence> MakeSyntheticCorpus(const SyntheticCorpusOptions& options);

// Predicate token of the synthetic lexicon, e.g. "verb3".
std::string SyntheticPredicate(std::size_t index);

// Judgments over the synthetic predicates; property likelihoods depend on a
// latent predicate class so that oracle vectors carry structure.
std::vector<SprJudgment> MakeSyntheticSpr(std::size_t predicates, std::size_t judgments,
                                          std::uint64_t seed);

}  // namespace semtensor

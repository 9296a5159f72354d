#include "semtensor/synthetic.h"

#include <algorithm>
#include <cmath>

#include "semtensor/random.h"

namespace semtensor {

namespace {

constexpr std::size_t kClasses = 5;
constexpr std::size_t kFrames = 12;

// Zipf-like index in [0, n).
std::size_t Skewed(Rng& rng, std::size_t n) {
  const double u = rng.Uniform();
  return std::min(n - 1, static_cast<std::size_t>(std::floor(n * u * u)));
}

}  // namespace

std::string SyntheticPredicate(std::size_t index) { return "verb" + std::to_string(index); }

std::vector<AnnotatedSentence> MakeSyntheticCorpus(const SyntheticCorpusOptions& options) {
  Rng rng(options.seed);
  std::vector<AnnotatedSentence> out;
  out.reserve(options.sentences);
  const std::size_t nouns_per_class = std::max<std::size_t>(1, options.nouns / kClasses);
  auto noun_for = [&](std::size_t cls) {
    // Mostly class-consistent arguments, some noise.
    const std::size_t c = rng.Uniform() < 0.8 ? cls : rng.Below(kClasses);
    return "noun" + std::to_string(c * nouns_per_class + rng.Below(nouns_per_class));
  };
  for (std::size_t s = 0; s < options.sentences; ++s) {
    AnnotatedSentence sent;
    sent.doc_id = "synth" + std::to_string(s / 10);
    const std::size_t verb = Skewed(rng, options.predicates);
    const std::size_t cls = verb % kClasses;
    auto& toks = sent.tokens;
    const std::int32_t subj_start = 0;
    toks.push_back(rng.Uniform() < 0.5 ? "the" : "a");
    if (rng.Uniform() < 0.3) toks.push_back("adj" + std::to_string(rng.Below(10)));
    toks.push_back(noun_for(cls));
    const Span subj{subj_start, static_cast<std::int32_t>(toks.size())};
    std::int32_t trig_start = static_cast<std::int32_t>(toks.size());
    if (rng.Uniform() < 0.2) toks.push_back("would");
    const std::int32_t verb_pos = static_cast<std::int32_t>(toks.size());
    toks.push_back(SyntheticPredicate(verb));
    const Span trigger{trig_start, verb_pos + 1};
    const std::int32_t obj_start = static_cast<std::int32_t>(toks.size());
    toks.push_back("the");
    toks.push_back(noun_for((cls + 1) % kClasses));
    const Span obj{obj_start, static_cast<std::int32_t>(toks.size())};
    if (rng.Uniform() < 0.3) toks.push_back("again");

    const std::string pb_frame = SyntheticPredicate(verb) + ".01";
    sent.annotations.push_back({ParserId::kPb, Span{verb_pos, verb_pos + 1}, pb_frame,
                                {{"ARG0", subj}, {"ARG1", obj}}});
    const std::string fn_frame = "Frame" + std::to_string(verb % kFrames);
    if (rng.Uniform() < 0.8) {
      sent.annotations.push_back(
          {ParserId::kFnA, trigger, fn_frame, {{"Agent", subj}, {"Theme", obj}}});
    }
    if (rng.Uniform() < options.fn_b_rate) {
      const std::string frame =
          rng.Uniform() < 0.7 ? fn_frame : "Frame" + std::to_string(rng.Below(kFrames));
      FrameAnnotation fb{ParserId::kFnB, trigger, frame, {{"Agent", subj}}};
      if (rng.Uniform() < 0.5) fb.roles.push_back({"Patient", obj});
      sent.annotations.push_back(std::move(fb));
    }
    if (rng.Uniform() < options.roleless_rate) {
      sent.annotations.push_back({ParserId::kFnB, obj, "Entity", {}});
    }
    out.push_back(std::move(sent));
  }
  return out;
}

std::vector<SprJudgment> MakeSyntheticSpr(std::size_t predicates, std::size_t judgments,
                                          std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SprJudgment> out;
  out.reserve(judgments);
  for (std::size_t n = 0; n < judgments; ++n) {
    SprJudgment j;
    const std::size_t verb = n < predicates ? n : rng.Below(predicates);
    const std::size_t cls = verb % kClasses;
    j.predicate = SyntheticPredicate(verb);
    j.argument = "noun" + std::to_string(rng.Below(100));
    const double r = rng.Uniform();
    j.relation = r < 0.6 ? Relation::kNsubj
                 : r < 0.9 ? Relation::kDobj
                 : r < 0.95 ? Relation::kIobj
                            : Relation::kNsubjpass;
    j.property = rng.Below(kSprProperties.size());
    // Class-aligned properties are likely; others less so.
    const bool aligned = j.property % kClasses == cls;
    j.applicable = rng.Uniform() < (aligned ? 0.9 : 0.5);
    const double base = aligned ? 4.0 : 2.0;
    j.likelihood = std::clamp(std::round(base + rng.Uniform(-1.0, 1.0)), 1.0, 5.0);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace semtensor

#include "semtensor/extract.h"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <thread>
#include <unordered_map>

#include "semtensor/error.h"

namespace semtensor {

namespace {

// Runs `work(shard, begin, end, builder)` over at most `num_threads`
// contiguous sentence shards and merges the partial builders in shard order.
template <typename MakeBuilder, typename Work>
LabeledTensorBuilder ShardedBuild(std::size_t n, int num_threads, MakeBuilder make, Work work) {
  const std::size_t shards =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, num_threads)), 1,
                              std::max<std::size_t>(1, n));
  LabeledTensorBuilder merged = make();
  if (shards == 1) {
    work(std::size_t{0}, std::size_t{0}, n, merged);
    return merged;
  }
  std::vector<LabeledTensorBuilder> parts;
  for (std::size_t s = 0; s < shards; ++s) parts.push_back(make());
  std::vector<std::thread> threads;
  for (std::size_t s = 0; s < shards; ++s) {
    threads.emplace_back([&, s] { work(s, n * s / shards, n * (s + 1) / shards, parts[s]); });
  }
  for (auto& t : threads) t.join();
  for (const auto& p : parts) merged.Merge(p);
  return merged;
}

std::vector<LabeledTensorBuilder::ModeSpec> FrameModeSpecs(const Vocabulary& trigger_vocab) {
  std::vector<LabeledTensorBuilder::ModeSpec> specs;
  specs.push_back({std::string(kTriggerMode), ModeRole::kTarget, trigger_vocab});
  specs.push_back({std::string(kFillerMode), ModeRole::kContext, std::nullopt});
  for (auto name : {kSepMode, kFnAFrameMode, kFnARoleMode, kFnBFrameMode, kFnBRoleMode,
                    kPbFrameMode, kPbRoleMode}) {
    specs.push_back({std::string(name), ModeRole::kFeature, std::nullopt});
  }
  return specs;
}

struct Assertion {
  std::string_view frame;
  std::string_view role;
};

}  // namespace

LabelSelector MakeSelector(TokenSelector selector) {
  if (selector == TokenSelector::kAllTokens) {
    return [](const AnnotatedSentence& s, const std::function<void(const std::string&)>& emit) {
      for (const auto& tok : s.tokens) emit(tok);
    };
  }
  return [](const AnnotatedSentence& s, const std::function<void(const std::string&)>& emit) {
    std::set<std::int32_t> heads;
    for (const auto& a : s.annotations) {
      if (!a.roles.empty()) heads.insert(HeadToken(a.trigger));
    }
    for (auto h : heads) emit(s.tokens[h]);
  };
}

Vocabulary BuildVocab(std::span<const AnnotatedSentence> sentences, const LabelSelector& selector,
                      std::int64_t threshold) {
  if (threshold < 1) throw Error(ErrorCategory::kConfig, "threshold T must be >= 1");
  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& s : sentences) {
    selector(s, [&counts](const std::string& label) { ++counts[label]; });
  }
  return Vocabulary::FromCounts(counts, threshold);
}

Vocabulary BuildVocab(std::span<const AnnotatedSentence> sentences, TokenSelector selector,
                      std::int64_t threshold) {
  return BuildVocab(sentences, MakeSelector(selector), threshold);
}

std::string OffsetLabel(int offset) {
  return offset > 0 ? "+" + std::to_string(offset) : std::to_string(offset);
}

SparseCountTensor ExtractWindowed(std::span<const AnnotatedSentence> sentences,
                                  const Vocabulary& vocab, const WindowOptions& options) {
  if (options.window < 1) throw Error(ErrorCategory::kConfig, "window must be >= 1");
  const bool with_sep = options.signed_offsets;
  auto make = [&] {
    std::vector<LabeledTensorBuilder::ModeSpec> specs;
    specs.push_back({std::string(kTargetMode), ModeRole::kTarget, vocab});
    specs.push_back({std::string(kContextMode), ModeRole::kContext, vocab});
    if (with_sep) specs.push_back({std::string(kSepMode), ModeRole::kFeature, std::nullopt});
    return LabeledTensorBuilder(std::move(specs));
  };
  std::vector<std::string> offset_labels;
  for (int o = -options.window; o <= options.window; ++o) offset_labels.push_back(OffsetLabel(o));

  auto work = [&](std::size_t, std::size_t begin, std::size_t end,
                  LabeledTensorBuilder& builder) {
    std::vector<std::string_view> labels(with_sep ? 3 : 2);
    std::vector<bool> in_vocab;
    for (std::size_t s = begin; s < end; ++s) {
      const auto& tokens = sentences[s].tokens;
      const int n = static_cast<int>(tokens.size());
      in_vocab.assign(n, false);
      for (int p = 0; p < n; ++p) in_vocab[p] = vocab.Contains(tokens[p]);
      for (int j = 0; j < n; ++j) {
        if (!in_vocab[j]) continue;
        const int lo = std::max(0, j - options.window);
        const int hi = std::min(n - 1, j + options.window);
        for (int i = lo; i <= hi; ++i) {
          if (i == j || !in_vocab[i]) continue;
          labels[0] = tokens[j];
          labels[1] = tokens[i];
          if (with_sep) labels[2] = offset_labels[i - j + options.window];
          builder.Add(labels, 1.0);
        }
      }
    }
  };
  return ShardedBuild(sentences.size(), options.num_threads, make, work).Build();
}

SparseCountTensor ExtractFrames(std::span<const AnnotatedSentence> sentences,
                                const Vocabulary& trigger_vocab, FrameExtractionStats* stats,
                                int num_threads) {
  const std::size_t shards = static_cast<std::size_t>(std::max(1, num_threads));
  std::vector<FrameExtractionStats> part_stats(shards);

  auto make = [&] { return LabeledTensorBuilder(FrameModeSpecs(trigger_vocab)); };
  auto work = [&](std::size_t shard, std::size_t begin, std::size_t end,
                  LabeledTensorBuilder& builder) {
    FrameExtractionStats& local = part_stats[shard];
    std::vector<std::string_view> labels(9);
    for (std::size_t s = begin; s < end; ++s) {
      const auto& sentence = sentences[s];
      // (trigger head, filler token) -> per-parser assertions in file order.
      std::map<std::pair<std::int32_t, std::int32_t>, std::array<std::vector<Assertion>, 3>>
          pairs;
      for (const auto& a : sentence.annotations) {
        if (a.roles.empty()) {
          ++local.roleless_annotations;
          continue;
        }
        const std::int32_t head = HeadToken(a.trigger);
        for (const auto& r : a.roles) {
          for (std::int32_t t = r.filler.start; t < r.filler.end; ++t) {
            ++local.triples;
            pairs[{head, t}][static_cast<int>(a.parser)].push_back({a.frame, r.role});
          }
        }
      }
      for (const auto& [key, by_parser] : pairs) {
        const auto [head, filler] = key;
        std::size_t n = 0;
        int parsers = 0;
        for (const auto& v : by_parser) {
          n = std::max(n, v.size());
          parsers += v.empty() ? 0 : 1;
        }
        if (parsers > 1) ++local.multi_parser_pairs;
        if (!trigger_vocab.Contains(sentence.tokens[head])) {
          local.skipped_out_of_vocab += n;
          continue;
        }
        const std::string sep = OffsetLabel(filler - head);
        for (std::size_t k = 0; k < n; ++k) {
          labels[0] = sentence.tokens[head];
          labels[1] = sentence.tokens[filler];
          labels[2] = sep;
          for (int p = 0; p < 3; ++p) {
            const bool has = k < by_parser[p].size();
            labels[3 + 2 * p] = has ? by_parser[p][k].frame : kNoFrame;
            labels[4 + 2 * p] = has ? by_parser[p][k].role : kNoRole;
          }
          builder.Add(labels, 1.0);
          ++local.records;
        }
      }
    }
  };
  LabeledTensorBuilder builder = ShardedBuild(sentences.size(), num_threads, make, work);
  if (stats) {
    *stats = {};
    for (const auto& p : part_stats) {
      stats->records += p.records;
      stats->triples += p.triples;
      stats->roleless_annotations += p.roleless_annotations;
      stats->skipped_out_of_vocab += p.skipped_out_of_vocab;
      stats->multi_parser_pairs += p.multi_parser_pairs;
    }
  }
  return builder.Build();
}

}  // namespace semtensor

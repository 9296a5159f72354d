#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "semtensor/corpus.h"
#include "semtensor/tensor.h"
#include "semtensor/vocabulary.h"

namespace semtensor {

inline constexpr std::string_view kNoFrame = "<NO_FRAME>";
inline constexpr std::string_view kNoRole = "<NO_ROLE>";

// Mode names of the windowed tensors.
inline constexpr std::string_view kTargetMode = "target";
inline constexpr std::string_view kContextMode = "context";
inline constexpr std::string_view kSepMode = "sep";

// Mode names of the 9-mode frame tensor, in schema order.
inline constexpr std::string_view kTriggerMode = "trigger";
inline constexpr std::string_view kFillerMode = "filler";
inline constexpr std::string_view kFnAFrameMode = "fn_a_frame";
inline constexpr std::string_view kFnARoleMode = "fn_a_role";
inline constexpr std::string_view kFnBFrameMode = "fn_b_frame";
inline constexpr std::string_view kFnBRoleMode = "fn_b_role";
inline constexpr std::string_view kPbFrameMode = "pb_frame";
inline constexpr std::string_view kPbRoleMode = "pb_role";

// Emits every label one sentence contributes to a vocabulary.
using LabelSelector =
    std::function<void(const AnnotatedSentence&, const std::function<void(const std::string&)>&)>;

enum class TokenSelector {
  kAllTokens,
  // Head token of each distinct trigger position whose annotation has at
  // least one role; several parsers on one position count once.
  kTriggerHeads,
};

LabelSelector MakeSelector(TokenSelector selector);

Vocabulary BuildVocab(std::span<const AnnotatedSentence> sentences, const LabelSelector& selector,
                      std::int64_t threshold);
Vocabulary BuildVocab(std::span<const AnnotatedSentence> sentences, TokenSelector selector,
                      std::int64_t threshold);

// Signed offset label: "-2", "0", "+1".
std::string OffsetLabel(int offset);

struct WindowOptions {
  int window = 2;
  bool signed_offsets = false;
  int num_threads = 1;
};

// (target, context) or (target, context, sep) counts. Both word modes share
// `vocab`; tokens outside it are neither targets nor contexts.
SparseCountTensor ExtractWindowed(std::span<const AnnotatedSentence> sentences,
                                  const Vocabulary& vocab, const WindowOptions& options);

struct FrameExtractionStats {
  std::size_t records = 0;               // mass written to the tensor
  std::size_t triples = 0;               // (annotation, role, filler token) seen
  std::size_t roleless_annotations = 0;  // dropped, no filled role
  std::size_t skipped_out_of_vocab = 0;  // records whose trigger missed the vocabulary
  std::size_t multi_parser_pairs = 0;    // (trigger, filler token) pairs merged across parsers
};

// The 9-mode tensor (trigger, filler, sep, fn_a_frame, fn_a_role, fn_b_frame,
// fn_b_role, pb_frame, pb_role). Assertions from different parsers on the same
// (trigger head, filler token) pair merge into one record; parsers that are
// silent on the pair carry <NO_FRAME>/<NO_ROLE>. When one parser asserts
// several labels on a pair, the k-th record takes each parser's k-th assertion.
SparseCountTensor ExtractFrames(std::span<const AnnotatedSentence> sentences,
                                const Vocabulary& trigger_vocab,
                                FrameExtractionStats* stats = nullptr, int num_threads = 1);

}  // namespace semtensor

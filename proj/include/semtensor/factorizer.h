#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semtensor/embeddings.h"
#include "semtensor/random.h"
#include "semtensor/tensor.h"

namespace semtensor {

struct TrainConfig {
  std::size_t dim = 100;
  int negatives = 15;
  int epochs = 5;
  double eta0 = 0.025;  // step size, decays linearly to eta0 / 100
  double gamma = 0.75;  // noise distribution exponent
  std::uint64_t seed = 1;
  // Applied by the pipeline (PruneRare) before training, not by Train().
  std::int64_t min_count = 100;
  // Largest count applied in one update; heavier cells are split into equal
  // sub-steps. Infinity applies every cell in a single step.
  double max_weight = 1.0;
  // 1 = deterministic. More threads shard cells and tolerate lost updates.
  int num_threads = 1;

  void Validate() const;
};

// Scores are clipped to [-kScoreClip, kScoreClip] inside the logistic.
inline constexpr double kScoreClip = 30.0;

// Sum over dimensions of the elementwise product of every vector in the cell.
double Score(const EmbeddingSet& embeddings, std::span<const Id> cell);

// Softmax over every context id with the cell's other modes held fixed; the
// cell's own context id is ignored.
std::vector<double> ContextDistribution(const EmbeddingSet& embeddings, std::span<const Id> cell);

double SoftmaxProb(const EmbeddingSet& embeddings, std::span<const Id> cell);

// sum over cells of count * log softmax_prob(cell). Never clipped.
double ExactLogLikelihood(const SparseCountTensor& tensor, const EmbeddingSet& embeddings);

// Draws context ids i.i.d. from P(i) proportional to count(i)^gamma.
class NoiseSampler {
 public:
  NoiseSampler(std::span<const double> counts, double gamma);

  std::size_t size() const { return prob_.size(); }
  double Probability(Id id) const { return prob_.at(id); }

  Id Sample(Rng& rng) const;

  // k draws, each redrawn while it equals `exclude`. Empty when no other id
  // has probability mass.
  void SampleNegatives(Id exclude, int k, Rng& rng, std::vector<Id>* out) const;
  std::vector<Id> SampleNegatives(Id exclude, int k, Rng& rng) const;

 private:
  std::vector<double> prob_;
  std::vector<double> cdf_;
};

struct VectorGradient {
  std::size_t mode = 0;
  Id id = 0;
  std::vector<double> grad;
};

struct NsResult {
  double loss = 0.0;
  // One entry per distinct (mode, id) vector touched, in schema mode order
  // with the context mode's entries last.
  std::vector<VectorGradient> grads;
};

// Negative-sampling loss -log sig(s+) - sum_k log sig(-s_k) of one cell and
// its gradient with respect to every participating vector.
NsResult NsLossAndGrads(const EmbeddingSet& embeddings, std::span<const Id> cell,
                        std::span<const Id> negatives);

// TARGET/CONTEXT ~ U(-0.5/d, 0.5/d); FEATURE = 1 + U(-0.01, 0.01).
EmbeddingSet InitEmbeddings(const ModeSchema& schema, const TrainConfig& config);

struct TrainStats {
  std::vector<double> epoch_mean_loss;      // unweighted mean per update
  std::vector<double> epoch_weighted_loss;  // count-weighted mean
  std::size_t visits = 0;
};

// Count-weighted negative-sampling SGD. Each epoch visits every nonzero cell
// in a seeded shuffled order, once per chunk of at most max_weight count
// (once in total when max_weight is infinite). Single-threaded runs are bitwise
// reproducible for a given seed. Throws a numeric error on non-finite loss.
EmbeddingSet Train(const SparseCountTensor& tensor, const TrainConfig& config,
                   TrainStats* stats = nullptr);

}  // namespace semtensor

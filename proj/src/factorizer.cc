#include "semtensor/factorizer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "semtensor/error.h"

namespace semtensor {

namespace {

double Clip(double s) { return std::clamp(s, -kScoreClip, kScoreClip); }

double Sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

// log(1 + e^x) without overflow.
double Softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

struct NsWorkspace {
  std::vector<double> prod;  // Hadamard product of the non-context vectors
  std::vector<double> q;     // sum of coefficient-weighted context vectors
  std::vector<double> coef;  // per negative: sigma(s_k)
};

// Loss and gradients for one positive context and its negatives.
// `others` are the non-context vectors; gradients are written to
// grad_others (others.size() x d), grad_pos (d) and grad_negs (negs.size() x d).
double NsCore(std::span<const std::span<const double>> others, std::span<const double> pos,
              std::span<const std::span<const double>> negs, double* grad_others,
              double* grad_pos, double* grad_negs, NsWorkspace& ws) {
  const std::size_t d = pos.size();
  ws.prod.assign(d, 1.0);
  for (const auto& v : others) {
    for (std::size_t t = 0; t < d; ++t) ws.prod[t] *= v[t];
  }
  double s_pos = 0.0;
  for (std::size_t t = 0; t < d; ++t) s_pos += pos[t] * ws.prod[t];
  const double a_pos = Sigmoid(Clip(s_pos)) - 1.0;
  double loss = Softplus(-Clip(s_pos));

  ws.q.resize(d);
  for (std::size_t t = 0; t < d; ++t) {
    ws.q[t] = a_pos * pos[t];
    grad_pos[t] = a_pos * ws.prod[t];
  }
  ws.coef.resize(negs.size());
  for (std::size_t k = 0; k < negs.size(); ++k) {
    double s = 0.0;
    for (std::size_t t = 0; t < d; ++t) s += negs[k][t] * ws.prod[t];
    const double a = Sigmoid(Clip(s));
    loss += Softplus(Clip(s));
    ws.coef[k] = a;
    double* g = grad_negs + k * d;
    for (std::size_t t = 0; t < d; ++t) {
      g[t] = a * ws.prod[t];
      ws.q[t] += a * negs[k][t];
    }
  }
  for (std::size_t m = 0; m < others.size(); ++m) {
    double* g = grad_others + m * d;
    for (std::size_t t = 0; t < d; ++t) {
      double rest = ws.q[t];
      for (std::size_t o = 0; o < others.size(); ++o) {
        if (o != m) rest *= others[o][t];
      }
      g[t] = rest;
    }
  }
  return loss;
}

std::string NormsDiagnostic(const EmbeddingSet& emb, std::span<const Id> cell) {
  std::ostringstream out;
  for (std::size_t m = 0; m < cell.size(); ++m) {
    double sq = 0.0;
    for (double v : emb.vec(m, cell[m])) sq += v * v;
    out << (m ? ", " : "") << emb.schema().mode(m).name << "[" << cell[m]
        << "]=" << std::sqrt(sq);
  }
  return out.str();
}

// Per-thread training state; everything the inner loop touches.
struct Trainer {
  const SparseCountTensor& tensor;
  const TrainConfig& config;
  const NoiseSampler& noise;
  EmbeddingSet& emb;
  std::vector<std::size_t> other_modes;
  std::size_t context_mode;
  std::size_t total_visits;

  NsWorkspace ws;
  std::vector<Id> negatives;
  std::vector<std::vector<double>> local;  // gathered copies in shared mode
  std::vector<std::span<const double>> other_vecs, neg_vecs;
  std::vector<double> grad_others, grad_pos, grad_negs;

  Trainer(const SparseCountTensor& t, const TrainConfig& c, const NoiseSampler& n,
          EmbeddingSet& e, std::size_t visits_per_epoch)
      : tensor(t), config(c), noise(n), emb(e), context_mode(t.schema().context_index()),
        total_visits(static_cast<std::size_t>(c.epochs) * visits_per_epoch) {
    for (std::size_t m = 0; m < t.arity(); ++m) {
      if (m != context_mode) other_modes.push_back(m);
    }
  }

  double StepSize(std::size_t visit) const {
    const double progress = static_cast<double>(visit) / static_cast<double>(total_visits);
    return config.eta0 * (1.0 - 0.99 * progress);
  }

  // Shared mode reads and writes parameters through relaxed atomics, so
  // concurrent threads may lose each other's updates but never tear values.
  template <bool kShared>
  double Visit(std::size_t k, std::size_t visit, double weight, Rng& rng) {
    const auto cell = tensor.cell(k);
    const Id ctx = cell[context_mode];
    noise.SampleNegatives(ctx, config.negatives, rng, &negatives);
    const std::size_t d = emb.dim();
    const std::size_t n_others = other_modes.size();

    other_vecs.resize(n_others);
    neg_vecs.resize(negatives.size());
    std::span<const double> pos_vec;
    if constexpr (kShared) {
      local.resize(n_others + 1 + negatives.size());
      auto gather = [&](std::size_t slot, std::span<double> src) {
        local[slot].resize(d);
        for (std::size_t t = 0; t < d; ++t) {
          local[slot][t] = std::atomic_ref<double>(src[t]).load(std::memory_order_relaxed);
        }
        return std::span<const double>(local[slot]);
      };
      for (std::size_t o = 0; o < n_others; ++o) {
        other_vecs[o] = gather(o, emb.vec(other_modes[o], cell[other_modes[o]]));
      }
      pos_vec = gather(n_others, emb.vec(context_mode, ctx));
      for (std::size_t j = 0; j < negatives.size(); ++j) {
        neg_vecs[j] = gather(n_others + 1 + j, emb.vec(context_mode, negatives[j]));
      }
    } else {
      for (std::size_t o = 0; o < n_others; ++o) {
        other_vecs[o] = emb.vec(other_modes[o], cell[other_modes[o]]);
      }
      pos_vec = emb.vec(context_mode, ctx);
      for (std::size_t j = 0; j < negatives.size(); ++j) {
        neg_vecs[j] = emb.vec(context_mode, negatives[j]);
      }
    }
    grad_others.resize(n_others * d);
    grad_pos.resize(d);
    grad_negs.resize(negatives.size() * d);
    const double loss = NsCore(other_vecs, pos_vec, neg_vecs, grad_others.data(),
                               grad_pos.data(), grad_negs.data(), ws);
    if (!std::isfinite(loss)) {
      throw Error(ErrorCategory::kNumeric,
                  "non-finite loss at visit " + std::to_string(visit) + ", cell " +
                      std::to_string(k) + " (" + NormsDiagnostic(emb, cell) + ")");
    }

    const double scale = StepSize(visit) * weight;
    auto apply = [&](std::span<double> dst, const double* g) {
      for (std::size_t t = 0; t < d; ++t) {
        if constexpr (kShared) {
          std::atomic_ref<double> ref(dst[t]);
          ref.store(ref.load(std::memory_order_relaxed) - scale * g[t],
                    std::memory_order_relaxed);
        } else {
          dst[t] -= scale * g[t];
        }
      }
    };
    for (std::size_t o = 0; o < n_others; ++o) {
      apply(emb.vec(other_modes[o], cell[other_modes[o]]), grad_others.data() + o * d);
    }
    apply(emb.vec(context_mode, ctx), grad_pos.data());
    for (std::size_t j = 0; j < negatives.size(); ++j) {
      apply(emb.vec(context_mode, negatives[j]), grad_negs.data() + j * d);
    }
    return loss;
  }
};

void Shuffle(std::vector<std::size_t>& order, Rng& rng) {
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.Below(i)]);
  }
}

}  // namespace

void TrainConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCategory::kConfig, msg); };
  if (dim < 1) fail("dim must be >= 1");
  if (negatives < 1) fail("negatives must be >= 1");
  if (epochs < 1) fail("epochs must be >= 1");
  if (!(eta0 > 0.0)) fail("eta0 must be > 0");
  if (!(gamma >= 0.0)) fail("gamma must be >= 0");
  if (min_count < 1) fail("min_count must be >= 1");
  if (!(max_weight >= 1.0)) fail("max_weight must be >= 1");
  if (num_threads < 1) fail("threads must be >= 1");
}

double Score(const EmbeddingSet& embeddings, std::span<const Id> cell) {
  const std::size_t d = embeddings.dim();
  double total = 0.0;
  for (std::size_t t = 0; t < d; ++t) {
    double p = 1.0;
    for (std::size_t m = 0; m < cell.size(); ++m) p *= embeddings.vec(m, cell[m])[t];
    total += p;
  }
  return total;
}

std::vector<double> ContextDistribution(const EmbeddingSet& embeddings, std::span<const Id> cell) {
  const std::size_t ctx_mode = embeddings.schema().context_index();
  const std::size_t d = embeddings.dim();
  std::vector<double> prod(d, 1.0);
  for (std::size_t m = 0; m < cell.size(); ++m) {
    if (m == ctx_mode) continue;
    const auto v = embeddings.vec(m, cell[m]);
    for (std::size_t t = 0; t < d; ++t) prod[t] *= v[t];
  }
  const Matrix& contexts = embeddings.mode(ctx_mode);
  std::vector<double> out(contexts.rows());
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < contexts.rows(); ++i) {
    double s = 0.0;
    const auto c = contexts.row(i);
    for (std::size_t t = 0; t < d; ++t) s += c[t] * prod[t];
    out[i] = s;
    max_score = std::max(max_score, s);
  }
  double z = 0.0;
  for (double& v : out) {
    v = std::exp(v - max_score);
    z += v;
  }
  for (double& v : out) v /= z;
  return out;
}

double SoftmaxProb(const EmbeddingSet& embeddings, std::span<const Id> cell) {
  return ContextDistribution(embeddings, cell)[cell[embeddings.schema().context_index()]];
}

double ExactLogLikelihood(const SparseCountTensor& tensor, const EmbeddingSet& embeddings) {
  if (!(tensor.schema() == embeddings.schema())) {
    // Vocabularies may differ in counts after pruning; arity and sizes must match.
    const auto& a = tensor.schema();
    const auto& b = embeddings.schema();
    bool ok = a.size() == b.size() && a.context_index() == b.context_index();
    for (std::size_t m = 0; ok && m < a.size(); ++m) {
      ok = a.mode(m).vocab.size() == b.mode(m).vocab.size();
    }
    if (!ok) {
      throw Error(ErrorCategory::kSchema, "tensor schema " + a.Describe() +
                                              " does not match embeddings " + b.Describe());
    }
  }
  const std::size_t ctx_mode = tensor.schema().context_index();
  const std::size_t d = embeddings.dim();
  const Matrix& contexts = embeddings.mode(ctx_mode);
  std::map<std::vector<Id>, std::pair<std::vector<double>, double>> slices;
  double total = 0.0;
  std::vector<Id> key;
  for (std::size_t k = 0; k < tensor.nnz(); ++k) {
    const auto cell = tensor.cell(k);
    key.assign(cell.begin(), cell.end());
    key[ctx_mode] = 0;
    auto it = slices.find(key);
    if (it == slices.end()) {
      std::vector<double> prod(d, 1.0);
      for (std::size_t m = 0; m < cell.size(); ++m) {
        if (m == ctx_mode) continue;
        const auto v = embeddings.vec(m, cell[m]);
        for (std::size_t t = 0; t < d; ++t) prod[t] *= v[t];
      }
      std::vector<double> scores(contexts.rows());
      double max_score = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < contexts.rows(); ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < d; ++t) s += contexts.at(i, t) * prod[t];
        scores[i] = s;
        max_score = std::max(max_score, s);
      }
      double z = 0.0;
      for (double s : scores) z += std::exp(s - max_score);
      const double log_z = max_score + std::log(z);
      it = slices.emplace(key, std::make_pair(std::move(scores), log_z)).first;
    }
    total += tensor.count(k) * (it->second.first[cell[ctx_mode]] - it->second.second);
  }
  return total;
}

NoiseSampler::NoiseSampler(std::span<const double> counts, double gamma) {
  if (counts.empty()) throw Error(ErrorCategory::kNumeric, "noise distribution over no contexts");
  prob_.resize(counts.size());
  double z = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    prob_[i] = std::pow(std::max(0.0, counts[i]), gamma);
    z += prob_[i];
  }
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCategory::kNumeric, "noise distribution has no mass");
  }
  cdf_.resize(prob_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < prob_.size(); ++i) {
    prob_[i] /= z;
    acc += prob_[i];
    cdf_[i] = acc;
  }
  // Last nonzero entry closes the interval exactly.
  for (std::size_t i = prob_.size(); i-- > 0;) {
    if (prob_[i] > 0.0) {
      for (std::size_t j = i; j < cdf_.size(); ++j) cdf_[j] = 1.0;
      break;
    }
  }
}

Id NoiseSampler::Sample(Rng& rng) const {
  const double u = rng.Uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<Id>(std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1));
}

void NoiseSampler::SampleNegatives(Id exclude, int k, Rng& rng, std::vector<Id>* out) const {
  out->clear();
  if (exclude < prob_.size() && prob_[exclude] >= 1.0 - 1e-12) return;
  for (int n = 0; n < k; ++n) {
    Id id;
    do {
      id = Sample(rng);
    } while (id == exclude);
    out->push_back(id);
  }
}

std::vector<Id> NoiseSampler::SampleNegatives(Id exclude, int k, Rng& rng) const {
  std::vector<Id> out;
  SampleNegatives(exclude, k, rng, &out);
  return out;
}

NsResult NsLossAndGrads(const EmbeddingSet& embeddings, std::span<const Id> cell,
                        std::span<const Id> negatives) {
  const std::size_t ctx_mode = embeddings.schema().context_index();
  const std::size_t d = embeddings.dim();
  std::vector<std::size_t> others;
  std::vector<std::span<const double>> other_vecs, neg_vecs;
  for (std::size_t m = 0; m < cell.size(); ++m) {
    if (m == ctx_mode) continue;
    others.push_back(m);
    other_vecs.push_back(embeddings.vec(m, cell[m]));
  }
  for (Id n : negatives) neg_vecs.push_back(embeddings.vec(ctx_mode, n));
  std::vector<double> g_others(others.size() * d), g_pos(d), g_negs(negatives.size() * d);
  NsWorkspace ws;
  NsResult result;
  result.loss = NsCore(other_vecs, embeddings.vec(ctx_mode, cell[ctx_mode]), neg_vecs,
                       g_others.data(), g_pos.data(), g_negs.data(), ws);
  for (std::size_t o = 0; o < others.size(); ++o) {
    result.grads.push_back({others[o], cell[others[o]],
                            {g_others.begin() + o * d, g_others.begin() + (o + 1) * d}});
  }
  // Context vectors: positive first, repeated negatives accumulated.
  std::map<Id, std::vector<double>> ctx_grads;
  ctx_grads[cell[ctx_mode]] = g_pos;
  for (std::size_t k = 0; k < negatives.size(); ++k) {
    auto& g = ctx_grads[negatives[k]];
    g.resize(d, 0.0);
    for (std::size_t t = 0; t < d; ++t) g[t] += g_negs[k * d + t];
  }
  for (auto& [id, g] : ctx_grads) result.grads.push_back({ctx_mode, id, std::move(g)});
  return result;
}

EmbeddingSet InitEmbeddings(const ModeSchema& schema, const TrainConfig& config) {
  EmbeddingSet emb(schema, config.dim);
  Rng rng(config.seed);
  const double half = 0.5 / static_cast<double>(config.dim);
  for (std::size_t m = 0; m < schema.size(); ++m) {
    const bool feature = schema.mode(m).role == ModeRole::kFeature;
    for (double& v : emb.mode(m).data()) {
      v = feature ? 1.0 + rng.Uniform(-0.01, 0.01) : rng.Uniform(-half, half);
    }
  }
  return emb;
}

EmbeddingSet Train(const SparseCountTensor& tensor, const TrainConfig& config,
                   TrainStats* stats) {
  config.Validate();
  if (tensor.empty()) throw Error(ErrorCategory::kConfig, "cannot train on an empty tensor");
  EmbeddingSet emb = InitEmbeddings(tensor.schema(), config);
  const auto marginal = tensor.Marginal(tensor.schema().context_index());
  const NoiseSampler noise(marginal, config.gamma);

  // The init stream is consumed first; training draws from a derived stream.
  Rng rng(SplitMix64(config.seed));
  // A cell heavier than max_weight becomes several equal-weight chunks that
  // are shuffled in with everything else.
  std::vector<std::size_t> order;
  std::vector<double> chunk_weight(tensor.nnz());
  for (std::size_t k = 0; k < tensor.nnz(); ++k) {
    const double chunks = std::max(1.0, std::ceil(tensor.count(k) / config.max_weight));
    chunk_weight[k] = tensor.count(k) / chunks;
    order.insert(order.end(), static_cast<std::size_t>(chunks), k);
  }

  TrainStats local_stats;
  const int threads = std::min<int>(config.num_threads, static_cast<int>(order.size()));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order, rng);
    const std::size_t base = static_cast<std::size_t>(epoch) * order.size();
    double loss_sum = 0.0, weighted_sum = 0.0, mass = 0.0;
    if (threads <= 1) {
      Trainer trainer(tensor, config, noise, emb, order.size());
      for (std::size_t n = 0; n < order.size(); ++n) {
        const double w = chunk_weight[order[n]];
        const double loss = trainer.Visit<false>(order[n], base + n, w, rng);
        loss_sum += loss;
        weighted_sum += loss * w;
        mass += w;
      }
    } else {
      std::vector<std::thread> pool;
      std::vector<double> sums(threads, 0.0), wsums(threads, 0.0), masses(threads, 0.0);
      std::exception_ptr failure;
      std::mutex failure_mu;
      for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            Trainer trainer(tensor, config, noise, emb, order.size());
            Rng thread_rng(SplitMix64(config.seed ^ SplitMix64(epoch * 1024 + t + 1)));
            const std::size_t begin = order.size() * t / threads;
            const std::size_t end = order.size() * (t + 1) / threads;
            for (std::size_t n = begin; n < end; ++n) {
              // Step schedule interleaves shards as if visits were round-robin.
              const std::size_t visit = base + (n - begin) * threads + t;
              const double w = chunk_weight[order[n]];
              const double loss = trainer.Visit<true>(
                  order[n], std::min(visit, trainer.total_visits - 1), w, thread_rng);
              sums[t] += loss;
              wsums[t] += loss * w;
              masses[t] += w;
            }
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      if (failure) std::rethrow_exception(failure);
      for (int t = 0; t < threads; ++t) {
        loss_sum += sums[t];
        weighted_sum += wsums[t];
        mass += masses[t];
      }
    }
    if (!emb.AllFinite()) {
      throw Error(ErrorCategory::kNumeric,
                  "non-finite embedding values after epoch " + std::to_string(epoch + 1));
    }
    local_stats.epoch_mean_loss.push_back(loss_sum / static_cast<double>(order.size()));
    local_stats.epoch_weighted_loss.push_back(weighted_sum / mass);
    local_stats.visits += order.size();
  }
  if (stats) *stats = std::move(local_stats);
  return emb;
}

}  // namespace semtensor

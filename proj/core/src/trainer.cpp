#include "typekg/trainer.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace typekg {

EpochSummary train_epoch(ModelParams& params, std::span<const TypedTriple> learn,
                         Sampler& sampler, double learning_rate) {
  if (learn.empty()) throw std::invalid_argument("learn split is empty");

  std::vector<std::size_t> order(learn.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng& rng = sampler.rng();
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.bounded(i)]);

  EpochSummary summary;
  double loss_sum = 0.0;
  std::uint64_t evaluated = 0, active = 0;
  for (std::size_t idx : order) {
    const TypedTriple& positive = learn[idx];
    TypedTriple negative;
    try {
      negative = sampler.corrupt(positive);
    } catch (const unsampleable_error&) {
      ++summary.skipped;
      continue;
    }
    HingeTerm term = sgd_step(params, positive, negative, learning_rate);
    loss_sum += term.loss;
    if (term.active) ++active;
    ++evaluated;
  }
  if (evaluated > 0) {
    summary.mean_loss = loss_sum / static_cast<double>(evaluated);
    summary.active_fraction = static_cast<double>(active) / static_cast<double>(evaluated);
  }
  return summary;
}

ReplicaResult train_replica(const DatasetSplits& ds, std::uint32_t dim, double margin,
                            const TrainConfig& config, std::uint32_t replica_index) {
  if (ds.validation.empty()) throw std::invalid_argument("validation split is empty");
  if (config.eval_every == 0 || config.patience == 0)
    throw std::invalid_argument("eval_every and patience must be >= 1");

  const std::uint64_t replica_seed = config.seed + replica_index;
  ModelParams params =
      init_params(dim, margin, ds.vocab, Rng::derive_stream(replica_seed, 0), config.norm);
  Sampler sampler(ds.vocab, ds.signatures, replica_seed, config.corruption);

  ReplicaResult result;
  result.replica_index = replica_index;
  bool have_best = false;
  std::uint32_t evals_without_improvement = 0;

  EpochSummary last_epoch;
  std::uint32_t epoch = 0;
  for (; epoch < config.max_epochs; ++epoch) {
    last_epoch = train_epoch(params, ds.learn, sampler, config.learning_rate);

    if ((epoch + 1) % config.eval_every != 0) continue;
    double mrr = evaluate(params, ds.validation).mrr;
    result.curve.push_back({epoch + 1, last_epoch.mean_loss, mrr});
    if (!have_best || mrr > result.best_valid_mrr) {
      result.params = params;
      result.best_valid_mrr = mrr;
      result.best_epoch = epoch + 1;
      have_best = true;
      evals_without_improvement = 0;
    } else if (++evals_without_improvement >= config.patience) {
      ++epoch;
      break;
    }
  }

  if (!have_best) {
    // No evaluation fell on the cadence (max_epochs below eval_every):
    // score whatever we ended with, the initial model included.
    double mrr = evaluate(params, ds.validation).mrr;
    result.params = std::move(params);
    result.best_valid_mrr = mrr;
    result.best_epoch = epoch;
    result.curve.push_back({epoch, last_epoch.mean_loss, mrr});
  }
  return result;
}

TrainOutcome train_model(const DatasetSplits& ds, std::uint32_t dim, double margin,
                         const TrainConfig& config, unsigned threads) {
  if (config.replicas == 0) throw std::invalid_argument("replica count must be >= 1");
  const std::uint32_t n_replicas = ds.has_tuning ? config.replicas : 1;

  TrainOutcome outcome;
  outcome.replicas.resize(n_replicas);

  const unsigned n_workers = std::max(1u, std::min(threads, n_replicas));
  std::atomic<std::uint32_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto work = [&] {
    for (std::uint32_t idx = next.fetch_add(1); idx < n_replicas; idx = next.fetch_add(1)) {
      try {
        outcome.replicas[idx] = train_replica(ds, dim, margin, config, idx);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (unsigned i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (ds.has_tuning) {
    for (auto& replica : outcome.replicas)
      replica.tuning_mrr = evaluate(replica.params, ds.tuning).mrr;
    std::size_t winner = 0;
    for (std::size_t i = 1; i < outcome.replicas.size(); ++i)
      if (outcome.replicas[i].tuning_mrr > outcome.replicas[winner].tuning_mrr) winner = i;
    outcome.chosen = winner;
  } else {
    outcome.chosen = 0;
  }
  return outcome;
}

}  // namespace typekg

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "typekg/lp_eval.hpp"
#include "typekg/model.hpp"
#include "typekg/sampler.hpp"

namespace typekg {

struct TrainConfig {
  double learning_rate = 0.01;
  std::uint32_t max_epochs = 1000;
  std::uint32_t eval_every = 10;  // epochs between validation-MRR evaluations
  std::uint32_t patience = 10;    // evaluations without improvement before stopping
  std::uint32_t replicas = 10;    // forced to 1 when the dataset has no tuning split
  std::uint64_t seed = 0;
  Norm norm = Norm::L2;
  SideChoice corruption = SideChoice::Uniform;
};

struct EpochSummary {
  double mean_loss = 0.0;
  double active_fraction = 0.0;
  std::uint32_t skipped = 0;  // unsampleable triples
};

struct EvalPoint {
  std::uint32_t epoch = 0;
  double mean_loss = 0.0;
  double valid_mrr = 0.0;
};

struct ReplicaResult {
  std::uint32_t replica_index = 0;
  std::uint32_t best_epoch = 0;
  double best_valid_mrr = 0.0;
  double tuning_mrr = 0.0;  // meaningful only when the dataset has a tuning split
  ModelParams params;       // snapshot with the best validation MRR, not the last
  std::vector<EvalPoint> curve;
};

struct TrainOutcome {
  std::size_t chosen = 0;  // index into replicas
  std::vector<ReplicaResult> replicas;
};

// One pass over the learn split in a freshly shuffled order: for each triple
// one corruption, one hinge, one SGD update. Unsampleable triples are
// skipped and counted. Throws std::invalid_argument on an empty split.
EpochSummary train_epoch(ModelParams& params, std::span<const TypedTriple> learn,
                         Sampler& sampler, double learning_rate);

// Full protocol for one replica: validation MRR every eval_every epochs,
// best-so-far snapshot kept, stop at max_epochs or after `patience`
// evaluations without improvement. The replica's sampler seed is
// config.seed + replica_index.
ReplicaResult train_replica(const DatasetSplits& ds, std::uint32_t dim, double margin,
                            const TrainConfig& config, std::uint32_t replica_index);

// Trains config.replicas independent replicas (just 1 when the dataset has
// no tuning split) and picks the winner by tuning-set MRR, ties to the
// lowest replica index. `threads` bounds replica-level parallelism.
TrainOutcome train_model(const DatasetSplits& ds, std::uint32_t dim, double margin,
                         const TrainConfig& config, unsigned threads = 1);

}  // namespace typekg

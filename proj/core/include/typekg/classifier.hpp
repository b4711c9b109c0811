#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "typekg/model.hpp"

namespace typekg {

// Multi-class task over one target relation: predict the tail class from
// the frozen head-entity embedding. One instance per distinct (head, tail)
// pair of the relation, pooled across all splits.
struct ClassifierTask {
  RelationId target = 0;
  TypeId head_type = 0;
  std::vector<EntityId> classes;  // distinct tail ids, ascending; class = index
  std::vector<std::pair<EntityRef, std::uint32_t>> instances;  // (head, class index)
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> valid_idx;
  std::vector<std::size_t> test_idx;
};

// k -> 2k -> C, logistic activations on the hidden and output layers.
struct MlpParams {
  std::uint32_t in_dim = 0;
  std::uint32_t hidden_dim = 0;
  std::uint32_t out_dim = 0;
  Matrix w1;  // hidden_dim x in_dim
  std::vector<double> b1;
  Matrix w2;  // out_dim x hidden_dim
  std::vector<double> b2;
};

struct MlpGradients {
  double loss = 0.0;
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
};

struct ClassifierConfig {
  double learning_rate = 0.01;
  std::uint32_t max_epochs = 1000;
  std::uint32_t eval_every = 5;
  std::uint32_t patience = 20;
  std::uint64_t seed = 0;
};

struct ClassifierResult {
  MlpParams params;  // best validation-accuracy snapshot
  double valid_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::uint32_t epochs_run = 0;
  std::uint32_t best_epoch = 0;
};

// The relation whose head coverage is largest: it maximizes the number of
// distinct head entities of its domain type with at least one triple,
// pooled across splits. Ties break to the lowest relation id.
RelationId select_target_relation(const DatasetSplits& ds);

// Pools the target relation's triples across all splits (duplicates
// dropped), shuffles with the seed, and splits 80/10/10 (floor train,
// floor validation, remainder test). Throws when the relation has fewer
// than 10 instances or fewer than 2 classes.
ClassifierTask build_task(const DatasetSplits& ds, RelationId target, std::uint64_t seed);

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
MlpParams init_mlp(std::uint32_t in_dim, std::uint32_t out_dim, std::uint64_t seed);

// Output activations, each in (0, 1).
std::vector<double> mlp_forward(const MlpParams& net, std::span<const double> input);

// argmax with ties to the lowest class index.
std::uint32_t mlp_predict(const MlpParams& net, std::span<const double> input);

// Summed per-output binary cross-entropy against the one-hot target.
double mlp_example_loss(const MlpParams& net, std::span<const double> input,
                        std::uint32_t target_class);

MlpGradients mlp_example_gradients(const MlpParams& net, std::span<const double> input,
                                   std::uint32_t target_class);

// Per-example SGD with early stopping on validation accuracy; entity
// embeddings are inputs only and never modified. Returns the snapshot with
// the best recorded validation accuracy and its test accuracy.
ClassifierResult train_classifier(const ClassifierTask& task, const ModelParams& embeddings,
                                  const ClassifierConfig& config);

double classifier_accuracy(const MlpParams& net, const ClassifierTask& task,
                           const ModelParams& embeddings,
                           std::span<const std::size_t> indices);

}  // namespace typekg

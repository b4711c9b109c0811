#include "typekg/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "typekg/rng.hpp"

namespace typekg {

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Forward pass keeping the hidden activations for backprop.
void forward_full(const MlpParams& net, std::span<const double> x, std::vector<double>& hidden,
                  std::vector<double>& output) {
  hidden.assign(net.hidden_dim, 0.0);
  for (std::uint32_t j = 0; j < net.hidden_dim; ++j) {
    double z = net.b1[j];
    auto w = net.w1.row(j);
    for (std::uint32_t i = 0; i < net.in_dim; ++i) z += w[i] * x[i];
    hidden[j] = logistic(z);
  }
  output.assign(net.out_dim, 0.0);
  for (std::uint32_t c = 0; c < net.out_dim; ++c) {
    double z = net.b2[c];
    auto w = net.w2.row(c);
    for (std::uint32_t j = 0; j < net.hidden_dim; ++j) z += w[j] * hidden[j];
    output[c] = logistic(z);
  }
}

double bce(double y, double target) {
  constexpr double eps = 1e-12;  // keeps the log finite when y saturates
  double p = std::min(1.0 - eps, std::max(eps, y));
  return -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
}

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i)
    std::swap(idx[i - 1], idx[rng.bounded(i)]);
}

}  // namespace

RelationId select_target_relation(const DatasetSplits& ds) {
  const std::uint32_t n_rel = ds.vocab.relation_count();
  std::vector<std::set<EntityId>> heads(n_rel);
  for (const auto* split : {&ds.learn, &ds.validation, &ds.tuning, &ds.test})
    for (const auto& t : *split) heads[t.relation].insert(t.head.entity);

  RelationId best = 0;
  std::size_t best_coverage = 0;
  for (RelationId r = 0; r < n_rel; ++r) {
    if (heads[r].size() > best_coverage) {
      best_coverage = heads[r].size();
      best = r;
    }
  }
  return best;
}

ClassifierTask build_task(const DatasetSplits& ds, RelationId target, std::uint64_t seed) {
  ClassifierTask task;
  task.target = target;
  task.head_type = ds.signatures.at(target).domain;

  std::set<std::pair<EntityId, EntityId>> seen;
  std::vector<std::pair<EntityRef, EntityId>> pairs;  // (head, tail id)
  for (const auto* split : {&ds.learn, &ds.validation, &ds.tuning, &ds.test}) {
    for (const auto& t : *split) {
      if (t.relation != target) continue;
      if (seen.emplace(t.head.entity, t.tail.entity).second)
        pairs.emplace_back(t.head, t.tail.entity);
    }
  }

  std::set<EntityId> class_set;
  for (const auto& [head, tail] : pairs) class_set.insert(tail);
  if (class_set.size() < 2)
    throw std::invalid_argument("target relation '" + ds.vocab.relation_name(target) +
                                "' has fewer than 2 tail classes");
  if (pairs.size() < 10)
    throw std::invalid_argument("target relation '" + ds.vocab.relation_name(target) +
                                "' has fewer than 10 instances");
  task.classes.assign(class_set.begin(), class_set.end());

  auto class_index = [&](EntityId tail) {
    return static_cast<std::uint32_t>(
        std::lower_bound(task.classes.begin(), task.classes.end(), tail) -
        task.classes.begin());
  };
  task.instances.reserve(pairs.size());
  for (const auto& [head, tail] : pairs) task.instances.emplace_back(head, class_index(tail));

  std::vector<std::size_t> order(task.instances.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  shuffle_indices(order, rng);

  const std::size_t n = order.size();
  const std::size_t n_train = n * 8 / 10;
  const std::size_t n_valid = n / 10;
  task.train_idx.assign(order.begin(), order.begin() + n_train);
  task.valid_idx.assign(order.begin() + n_train, order.begin() + n_train + n_valid);
  task.test_idx.assign(order.begin() + n_train + n_valid, order.end());
  return task;
}

MlpParams init_mlp(std::uint32_t in_dim, std::uint32_t out_dim, std::uint64_t seed) {
  if (in_dim == 0 || out_dim == 0) throw std::invalid_argument("mlp dimensions must be >= 1");
  MlpParams net;
  net.in_dim = in_dim;
  net.hidden_dim = 2 * in_dim;
  net.out_dim = out_dim;
  net.w1 = Matrix(net.hidden_dim, net.in_dim);
  net.b1.assign(net.hidden_dim, 0.0);
  net.w2 = Matrix(net.out_dim, net.hidden_dim);
  net.b2.assign(net.out_dim, 0.0);

  Rng rng(seed);
  const double bound1 = std::sqrt(6.0 / static_cast<double>(net.in_dim + net.hidden_dim));
  for (double& v : net.w1.data) v = rng.uniform(-bound1, bound1);
  const double bound2 = std::sqrt(6.0 / static_cast<double>(net.hidden_dim + net.out_dim));
  for (double& v : net.w2.data) v = rng.uniform(-bound2, bound2);
  return net;
}

std::vector<double> mlp_forward(const MlpParams& net, std::span<const double> input) {
  if (input.size() != net.in_dim) throw std::invalid_argument("input length != in_dim");
  std::vector<double> hidden, output;
  forward_full(net, input, hidden, output);
  return output;
}

std::uint32_t mlp_predict(const MlpParams& net, std::span<const double> input) {
  std::vector<double> out = mlp_forward(net, input);
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < out.size(); ++c)
    if (out[c] > out[best]) best = c;
  return best;
}

double mlp_example_loss(const MlpParams& net, std::span<const double> input,
                        std::uint32_t target_class) {
  std::vector<double> out = mlp_forward(net, input);
  double loss = 0.0;
  for (std::uint32_t c = 0; c < out.size(); ++c)
    loss += bce(out[c], c == target_class ? 1.0 : 0.0);
  return loss;
}

MlpGradients mlp_example_gradients(const MlpParams& net, std::span<const double> input,
                                   std::uint32_t target_class) {
  std::vector<double> hidden, output;
  forward_full(net, input, hidden, output);

  MlpGradients g;
  g.w1 = Matrix(net.hidden_dim, net.in_dim);
  g.b1.assign(net.hidden_dim, 0.0);
  g.w2 = Matrix(net.out_dim, net.hidden_dim);
  g.b2.assign(net.out_dim, 0.0);

  // dL/dz2 for sigmoid + BCE collapses to (y - target).
  std::vector<double> delta2(net.out_dim);
  for (std::uint32_t c = 0; c < net.out_dim; ++c) {
    double target = c == target_class ? 1.0 : 0.0;
    g.loss += bce(output[c], target);
    delta2[c] = output[c] - target;
  }
  for (std::uint32_t c = 0; c < net.out_dim; ++c) {
    auto row = g.w2.row(c);
    for (std::uint32_t j = 0; j < net.hidden_dim; ++j) row[j] = delta2[c] * hidden[j];
    g.b2[c] = delta2[c];
  }
  for (std::uint32_t j = 0; j < net.hidden_dim; ++j) {
    double back = 0.0;
    for (std::uint32_t c = 0; c < net.out_dim; ++c) back += net.w2(c, j) * delta2[c];
    double delta1 = back * hidden[j] * (1.0 - hidden[j]);
    auto row = g.w1.row(j);
    for (std::uint32_t i = 0; i < net.in_dim; ++i) row[i] = delta1 * input[i];
    g.b1[j] = delta1;
  }
  return g;
}

double classifier_accuracy(const MlpParams& net, const ClassifierTask& task,
                           const ModelParams& embeddings,
                           std::span<const std::size_t> indices) {
  if (indices.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t idx : indices) {
    const auto& [head, cls] = task.instances[idx];
    auto x = embeddings.entity_tables.at(head.type).row(head.entity);
    if (mlp_predict(net, x) == cls) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(indices.size());
}

ClassifierResult train_classifier(const ClassifierTask& task, const ModelParams& embeddings,
                                  const ClassifierConfig& config) {
  if (task.train_idx.empty()) throw std::invalid_argument("classifier task has no training split");

  const std::uint32_t n_classes = static_cast<std::uint32_t>(task.classes.size());
  MlpParams net = init_mlp(embeddings.dim, n_classes, config.seed);
  Rng rng(Rng::derive_stream(config.seed, 1));

  ClassifierResult result;
  bool have_best = false;
  std::uint32_t evals_without_improvement = 0;

  std::vector<std::size_t> order = task.train_idx;
  std::uint32_t epoch = 0;
  for (; epoch < config.max_epochs; ++epoch) {
    shuffle_indices(order, rng);
    for (std::size_t idx : order) {
      const auto& [head, cls] = task.instances[idx];
      auto x = embeddings.entity_tables.at(head.type).row(head.entity);
      MlpGradients g = mlp_example_gradients(net, x, cls);
      for (std::size_t i = 0; i < net.w1.data.size(); ++i)
        net.w1.data[i] -= config.learning_rate * g.w1.data[i];
      for (std::size_t i = 0; i < net.b1.size(); ++i)
        net.b1[i] -= config.learning_rate * g.b1[i];
      for (std::size_t i = 0; i < net.w2.data.size(); ++i)
        net.w2.data[i] -= config.learning_rate * g.w2.data[i];
      for (std::size_t i = 0; i < net.b2.size(); ++i)
        net.b2[i] -= config.learning_rate * g.b2[i];
    }

    if (config.eval_every > 0 && (epoch + 1) % config.eval_every == 0) {
      double acc = classifier_accuracy(net, task, embeddings, task.valid_idx);
      if (!have_best || acc > result.valid_accuracy) {
        result.params = net;
        result.valid_accuracy = acc;
        result.best_epoch = epoch + 1;
        have_best = true;
        evals_without_improvement = 0;
      } else if (++evals_without_improvement >= config.patience) {
        ++epoch;
        break;
      }
    }
  }
  result.epochs_run = epoch;

  if (!have_best) {
    result.params = net;
    result.valid_accuracy = classifier_accuracy(net, task, embeddings, task.valid_idx);
    result.best_epoch = epoch;
  }
  result.test_accuracy = classifier_accuracy(result.params, task, embeddings, task.test_idx);
  return result;
}

}  // namespace typekg

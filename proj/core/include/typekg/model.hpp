#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "typekg/dataset.hpp"

namespace typekg {

enum class Norm { L1, L2 };

std::string_view to_string(Norm n);
Norm norm_from_string(std::string_view s);

// Row-major dense matrix of doubles; rows are embedding vectors.
struct Matrix {
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows(rows), cols(cols), data(rows * cols, 0.0) {}

  std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> row(std::size_t r) const { return {data.data() + r * cols, cols}; }
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
};

// Embedding tables: one per entity type (each type lives in its own
// k-dimensional space) plus one for relations. Entity rows are kept on the
// unit sphere (|x| = 1) by init_params and sgd_step; relation rows are
// unconstrained.
struct ModelParams {
  std::uint32_t dim = 0;
  double margin = 1.0;
  Norm norm = Norm::L2;
  std::vector<Matrix> entity_tables;  // indexed by TypeId
  Matrix relation_table;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// One evaluation of the margin ranking objective for a (positive, negative)
// pair: loss = max(0, margin + score(pos) - score(neg)).
struct HingeTerm {
  double positive_score = 0.0;
  double negative_score = 0.0;
  double loss = 0.0;
  bool active = false;
};

// Accumulated analytic gradient of the active hinge w.r.t. every embedding
// row it touches. An entity shared between the positive and the negative
// triple appears once, with both contributions summed.
struct HingeGradient {
  HingeTerm term;
  std::vector<std::pair<EntityRef, std::vector<double>>> entity_grads;
  std::vector<double> relation_grad;
  RelationId relation = 0;
};

// All rows drawn i.i.d. uniform on [-6/sqrt(k), +6/sqrt(k)]; entity rows are
// then normalized to unit L2 norm. Deterministic given the seed: entity
// tables are filled in type-id order, then the relation table, row by row.
ModelParams init_params(std::uint32_t dim, double margin, const Vocabulary& vocab,
                        std::uint64_t seed, Norm norm = Norm::L2);

// Dissimilarity score |h + r - t| under the configured norm; lower means
// more plausible. Throws std::out_of_range on ids unknown to the model.
double score(const ModelParams& params, const TypedTriple& triple);

// Throws std::invalid_argument when the pair disagrees on the relation.
HingeTerm hinge(const ModelParams& params, const TypedTriple& positive,
                const TypedTriple& negative);

HingeGradient hinge_gradient(const ModelParams& params, const TypedTriple& positive,
                             const TypedTriple& negative);

// One per-example SGD update. Inactive hinge (or lr == 0) leaves the
// parameters bitwise unchanged; otherwise every touched entity row is
// re-normalized to the unit sphere after the step. Returns the hinge term
// evaluated before the update.
HingeTerm sgd_step(ModelParams& params, const TypedTriple& positive,
                   const TypedTriple& negative, double learning_rate);

// Text checkpoint, full precision (shortest round-trip decimal), layout:
//
//   typekg-model 1
//   dim <k>
//   margin <gamma>
//   norm <L1|L2>
//   types <n>
//   <entity-count of type 0..n-1, one per line>
//   relations <m>
//   <then one row of k values per line: entity tables in type order,
//    then the relation table>
void checkpoint_save(const ModelParams& params, const std::string& path);
ModelParams checkpoint_load(const std::string& path);

}  // namespace typekg

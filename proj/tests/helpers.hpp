#pragma once

// Shared fixtures and independent oracles for the test suites. The oracles
// deliberately re-derive results through a different route than the library
// (full sort instead of counting, one-pass moment sums instead of two-pass)
// so that agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "typekg/classifier.hpp"
#include "typekg/dataset.hpp"
#include "typekg/lp_eval.hpp"
#include "typekg/model.hpp"
#include "typekg/rng.hpp"

namespace typekg::testing {

inline ParsedTriples parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_triples(in);
}

// Two-type toy vocabulary: n_a entities of type "a", n_b of type "b",
// relations r0..r{n_rel-1} all a -> b.
struct ToyKg {
  Vocabulary vocab;
  std::vector<RelationSignature> signatures;
};

inline ToyKg make_toy_kg(std::uint32_t n_a, std::uint32_t n_b, std::uint32_t n_rel) {
  ToyKg kg;
  TypeId a = kg.vocab.intern_type("a");
  TypeId b = kg.vocab.intern_type("b");
  for (std::uint32_t i = 0; i < n_a; ++i) kg.vocab.intern_entity(a, "a" + std::to_string(i));
  for (std::uint32_t i = 0; i < n_b; ++i) kg.vocab.intern_entity(b, "b" + std::to_string(i));
  for (std::uint32_t r = 0; r < n_rel; ++r) {
    kg.vocab.intern_relation("r" + std::to_string(r));
    kg.signatures.push_back({r, a, b});
  }
  return kg;
}

// ---- link-prediction oracle: materialize every candidate's score() and
// fully sort, mean rank over the tied block ----------------------------------

inline double oracle_rank(const ModelParams& params, const LPQuery& query) {
  const bool tail_missing = query.missing == CorruptionSide::Tail;
  const TypeId pool_type = tail_missing ? query.triple.tail.type : query.triple.head.type;
  const EntityId truth = tail_missing ? query.triple.tail.entity : query.triple.head.entity;
  const std::uint32_t pool = static_cast<std::uint32_t>(params.entity_tables[pool_type].rows);

  std::vector<double> distances(pool);
  for (EntityId c = 0; c < pool; ++c) {
    TypedTriple probe = query.triple;
    (tail_missing ? probe.tail.entity : probe.head.entity) = c;
    distances[c] = score(params, probe);
  }
  const double d_true = distances[truth];
  std::vector<double> sorted = distances;
  std::sort(sorted.begin(), sorted.end());
  auto lo = std::lower_bound(sorted.begin(), sorted.end(), d_true) - sorted.begin();
  auto hi = std::upper_bound(sorted.begin(), sorted.end(), d_true) - sorted.begin();
  // tied block occupies ranks lo+1 .. hi
  return static_cast<double>(lo + 1 + hi) / 2.0;
}

struct OracleReport {
  double mrr = 0.0, mean_rank = 0.0, hits1 = 0.0, hits3 = 0.0, hits10 = 0.0;
};

inline OracleReport oracle_evaluate(const ModelParams& params,
                                    const std::vector<TypedTriple>& triples) {
  OracleReport rep;
  std::size_t n = 0;
  for (const auto& t : triples) {
    for (auto side : {CorruptionSide::Head, CorruptionSide::Tail}) {
      double rank = oracle_rank(params, {t, side});
      rep.mrr += 1.0 / rank;
      rep.mean_rank += rank;
      rep.hits1 += rank <= 1.0 ? 1.0 : 0.0;
      rep.hits3 += rank <= 3.0 ? 1.0 : 0.0;
      rep.hits10 += rank <= 10.0 ? 1.0 : 0.0;
      ++n;
    }
  }
  rep.mrr /= static_cast<double>(n);
  rep.mean_rank /= static_cast<double>(n);
  rep.hits1 /= static_cast<double>(n);
  rep.hits3 /= static_cast<double>(n);
  rep.hits10 /= static_cast<double>(n);
  return rep;
}

// ---- correlation oracles ----------------------------------------------------

inline double ref_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

inline std::vector<double> ref_ranks(const std::vector<double>& v) {
  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), v[i]) - sorted.begin();
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), v[i]) - sorted.begin();
    out[i] = static_cast<double>(lo + 1 + hi) / 2.0;
  }
  return out;
}

inline double ref_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return ref_pearson(ref_ranks(x), ref_ranks(y));
}

// ---- finite differences -----------------------------------------------------

// Central difference of the hinge loss w.r.t. one coordinate of one
// embedding row (entity row when `entity` is set, relation row otherwise).
inline double fd_hinge(const ModelParams& params, const TypedTriple& pos,
                       const TypedTriple& neg, bool is_entity, EntityRef entity,
                       RelationId relation, std::size_t coord, double step) {
  auto bump = [&](double delta) {
    ModelParams p = params;
    auto row = is_entity ? p.entity_tables[entity.type].row(entity.entity)
                         : p.relation_table.row(relation);
    row[coord] += delta;
    return hinge(p, pos, neg).loss;
  };
  return (bump(step) - bump(-step)) / (2.0 * step);
}

}  // namespace typekg::testing

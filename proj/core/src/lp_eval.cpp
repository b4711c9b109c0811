#include "typekg/lp_eval.hpp"

#include <cmath>
#include <stdexcept>

namespace typekg {

namespace {

// Distance of the candidate-substituted triple, with the residual evaluated
// exactly as score() evaluates it (h[i] + r[i] - t[i], left to right) so
// ranking and scoring never disagree in the last ulp.
double candidate_distance(const ModelParams& params, std::span<const double> head,
                          std::span<const double> rel, std::span<const double> tail) {
  double acc = 0.0;
  if (params.norm == Norm::L2) {
    for (std::size_t i = 0; i < head.size(); ++i) {
      double v = head[i] + rel[i] - tail[i];
      acc += v * v;
    }
    return std::sqrt(acc);
  }
  for (std::size_t i = 0; i < head.size(); ++i) acc += std::abs(head[i] + rel[i] - tail[i]);
  return acc;
}

}  // namespace

TripleSet::TripleSet(const DatasetSplits& ds) {
  for (const auto* split : {&ds.learn, &ds.validation, &ds.tuning, &ds.test})
    for (const auto& t : *split) insert(t);
}

std::uint64_t TripleSet::pair_key(const TypedTriple& t) {
  return (static_cast<std::uint64_t>(t.head.entity) << 32) | t.tail.entity;
}

void TripleSet::insert(const TypedTriple& t) {
  if (t.relation >= by_relation_.size()) by_relation_.resize(t.relation + 1);
  by_relation_[t.relation].insert(pair_key(t));
}

bool TripleSet::contains(const TypedTriple& t) const {
  return t.relation < by_relation_.size() && by_relation_[t.relation].count(pair_key(t)) != 0;
}

double rank_of_truth(const ModelParams& params, const LPQuery& query, RankingMode mode,
                     const TripleSet* known) {
  const TypedTriple& t = query.triple;
  const bool tail_missing = query.missing == CorruptionSide::Tail;
  const TypeId pool_type = tail_missing ? t.tail.type : t.head.type;
  const EntityId true_entity = tail_missing ? t.tail.entity : t.head.entity;
  const Matrix& pool = params.entity_tables.at(pool_type);
  if (true_entity >= pool.rows) throw std::out_of_range("query entity id out of range");
  if (t.relation >= params.relation_table.rows)
    throw std::out_of_range("query relation id out of range");

  auto rel = params.relation_table.row(t.relation);
  auto fixed_head = params.entity_tables.at(t.head.type).row(t.head.entity);
  auto fixed_tail = params.entity_tables.at(t.tail.type).row(t.tail.entity);
  auto distance_of = [&](EntityId c) {
    auto cand = pool.row(c);
    return tail_missing ? candidate_distance(params, fixed_head, rel, cand)
                        : candidate_distance(params, cand, rel, fixed_tail);
  };

  const double true_distance = distance_of(true_entity);

  std::uint64_t smaller = 0, tied = 0;
  TypedTriple probe = t;
  for (EntityId c = 0; c < pool.rows; ++c) {
    if (mode == RankingMode::Filtered && c != true_entity && known != nullptr) {
      if (tail_missing)
        probe.tail.entity = c;
      else
        probe.head.entity = c;
      if (known->contains(probe)) continue;
    }
    double d = distance_of(c);
    if (d < true_distance)
      ++smaller;
    else if (d == true_distance)
      ++tied;
  }
  // tied includes the true entity; the tied block occupies ranks
  // [smaller+1, smaller+tied], and we report its mean.
  return static_cast<double>(smaller) + (static_cast<double>(tied) + 1.0) / 2.0;
}

LPReport evaluate_queries(const ModelParams& params, std::span<const LPQuery> queries,
                          RankingMode mode, const TripleSet* known) {
  if (queries.empty()) throw std::invalid_argument("no queries to evaluate");
  LPReport report;
  std::map<RelationId, double> rr_sum;
  double mrr_acc = 0.0, rank_acc = 0.0;
  std::uint64_t h1 = 0, h3 = 0, h10 = 0;
  for (const LPQuery& q : queries) {
    double rank = rank_of_truth(params, q, mode, known);
    double rr = 1.0 / rank;
    mrr_acc += rr;
    rank_acc += rank;
    if (rank <= 1.0) ++h1;
    if (rank <= 3.0) ++h3;
    if (rank <= 10.0) ++h10;
    rr_sum[q.triple.relation] += rr;
    report.per_relation_queries[q.triple.relation] += 1;
  }
  const double n = static_cast<double>(queries.size());
  report.query_count = queries.size();
  report.mrr = mrr_acc / n;
  report.mean_rank = rank_acc / n;
  report.hits1 = static_cast<double>(h1) / n;
  report.hits3 = static_cast<double>(h3) / n;
  report.hits10 = static_cast<double>(h10) / n;
  for (const auto& [rel, sum] : rr_sum)
    report.per_relation_mrr[rel] =
        sum / static_cast<double>(report.per_relation_queries[rel]);
  return report;
}

LPReport evaluate(const ModelParams& params, std::span<const TypedTriple> triples,
                  RankingMode mode, const TripleSet* known) {
  if (triples.empty()) throw std::invalid_argument("no triples to evaluate");
  std::vector<LPQuery> queries;
  queries.reserve(triples.size() * 2);
  for (const auto& t : triples) {
    queries.push_back({t, CorruptionSide::Head});
    queries.push_back({t, CorruptionSide::Tail});
  }
  return evaluate_queries(params, queries, mode, known);
}

double mrr_for_relation(const LPReport& report, RelationId relation) {
  auto it = report.per_relation_mrr.find(relation);
  if (it == report.per_relation_mrr.end())
    throw std::out_of_range("relation " + std::to_string(relation) + " absent from report");
  return it->second;
}

}  // namespace typekg

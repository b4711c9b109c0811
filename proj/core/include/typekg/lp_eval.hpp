#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <unordered_set>
#include <vector>

#include "typekg/model.hpp"
#include "typekg/sampler.hpp"

namespace typekg {

// A completion query: the triple with one side hidden. The hidden side's
// type is known (relation signatures fix it), so candidates are exactly the
// entities of that type.
struct LPQuery {
  TypedTriple triple;
  CorruptionSide missing;
};

struct LPReport {
  double mrr = 0.0;
  double mean_rank = 0.0;
  double hits1 = 0.0;
  double hits3 = 0.0;
  double hits10 = 0.0;
  std::map<RelationId, double> per_relation_mrr;
  std::map<RelationId, std::uint64_t> per_relation_queries;
  std::uint64_t query_count = 0;
};

// Raw keeps every candidate; Filtered drops candidates that would form a
// known true triple other than the query's own. Raw is the protocol used
// everywhere by default.
enum class RankingMode { Raw, Filtered };

// Known-triple index for filtered ranking. Types are implied by the
// relation signature, so (head, relation, tail) identifies a triple.
class TripleSet {
 public:
  TripleSet() = default;
  explicit TripleSet(const DatasetSplits& ds);
  void insert(const TypedTriple& t);
  bool contains(const TypedTriple& t) const;

 private:
  std::vector<std::unordered_set<std::uint64_t>> by_relation_;
  static std::uint64_t pair_key(const TypedTriple& t);
};

// Rank of the true entity among all candidates of the required type, by
// ascending distance (ascending distance = descending plausibility). Ties
// resolve to the mean rank of the tied block, so the result may be
// fractional. Always in [1, pool size].
double rank_of_truth(const ModelParams& params, const LPQuery& query,
                     RankingMode mode = RankingMode::Raw, const TripleSet* known = nullptr);

// Aggregates over explicit queries.
LPReport evaluate_queries(const ModelParams& params, std::span<const LPQuery> queries,
                          RankingMode mode = RankingMode::Raw,
                          const TripleSet* known = nullptr);

// Standard protocol: two queries per triple, head-missing and tail-missing.
// Throws std::invalid_argument on an empty triple list.
LPReport evaluate(const ModelParams& params, std::span<const TypedTriple> triples,
                  RankingMode mode = RankingMode::Raw, const TripleSet* known = nullptr);

// Per-relation MRR lookup; throws std::out_of_range when the relation has no
// queries in the report.
double mrr_for_relation(const LPReport& report, RelationId relation);

}  // namespace typekg

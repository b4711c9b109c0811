#include "typekg/sampler.hpp"

#include <sstream>

namespace typekg {

Sampler::Sampler(const Vocabulary& vocab, const std::vector<RelationSignature>& signatures,
                 std::uint64_t seed, SideChoice side_choice)
    : vocab_(vocab), signatures_(signatures), rng_(seed), side_choice_(side_choice) {}

TypedTriple Sampler::corrupt(const TypedTriple& positive) {
  const RelationSignature& sig = signatures_.at(positive.relation);
  const std::uint32_t head_pool = vocab_.entity_count(sig.domain);
  const std::uint32_t tail_pool = vocab_.entity_count(sig.range);

  if (head_pool < 2 && tail_pool < 2) {
    std::ostringstream msg;
    msg << "triple of relation '" << vocab_.relation_name(positive.relation)
        << "' cannot be corrupted: both entity pools have a single entity";
    throw unsampleable_error(msg.str());
  }

  CorruptionSide side;
  if (side_choice_ == SideChoice::Uniform) {
    side = rng_.coin() ? CorruptionSide::Head : CorruptionSide::Tail;
  } else {
    double tph = sig.tails_per_head, hpt = sig.heads_per_tail;
    double p_head = (tph + hpt) > 0.0 ? tph / (tph + hpt) : 0.5;
    side = rng_.uniform() < p_head ? CorruptionSide::Head : CorruptionSide::Tail;
  }
  if (side == CorruptionSide::Head && head_pool < 2) side = CorruptionSide::Tail;
  if (side == CorruptionSide::Tail && tail_pool < 2) side = CorruptionSide::Head;

  const bool corrupt_head = side == CorruptionSide::Head;
  const std::uint32_t pool = corrupt_head ? head_pool : tail_pool;
  const EntityId original = corrupt_head ? positive.head.entity : positive.tail.entity;

  EntityId replacement = original;
  for (int attempt = 0; attempt < 100 && replacement == original; ++attempt)
    replacement = static_cast<EntityId>(rng_.bounded(pool));
  if (replacement == original)
    throw unsampleable_error("no distinct replacement found after 100 attempts");

  TypedTriple corrupted = positive;
  if (corrupt_head)
    corrupted.head.entity = replacement;
  else
    corrupted.tail.entity = replacement;
  return corrupted;
}

}  // namespace typekg

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "typekg/dataset.hpp"
#include "typekg/rng.hpp"

namespace typekg {

enum class CorruptionSide { Head, Tail };

// How the corrupted side is picked. Uniform is the default; ByCardinality
// follows the classic bernoulli scheme (corrupt the head with probability
// tph/(tph+hpt) from the relation's fan averages).
enum class SideChoice { Uniform, ByCardinality };

class unsampleable_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Type-respecting corruption of training triples. One instance per training
// worker; never shared. Deterministic: identical seed and call sequence
// yield identical outputs.
class Sampler {
 public:
  Sampler(const Vocabulary& vocab, const std::vector<RelationSignature>& signatures,
          std::uint64_t seed, SideChoice side_choice = SideChoice::Uniform);

  // Replaces the head or the tail with a different entity of the same type,
  // drawn uniformly. Falls back to the other side when the chosen side's
  // pool has fewer than two entities; throws unsampleable_error when both
  // pools do (callers skip the triple).
  TypedTriple corrupt(const TypedTriple& positive);

  // The generator also drives epoch shuffles so that one seed pins down a
  // whole training trajectory.
  Rng& rng() { return rng_; }

 private:
  const Vocabulary& vocab_;
  const std::vector<RelationSignature>& signatures_;
  Rng rng_;
  SideChoice side_choice_;
};

}  // namespace typekg

#pragma once

#include <cstdint>

#include "typekg/dataset.hpp"

namespace typekg {

// Deterministic toy knowledge graph for end-to-end self-tests.
//
// Three types and three relations over `entities_per_type` head entities:
//   hasClass   item -> label   functional many-to-one; each item's class is
//                              its index parity ("even"/"odd"), so the label
//                              type has exactly two entities
//   pairedWith item -> item    one-to-one involution between items of the
//                              same parity (an odd-sized parity group leaves
//                              one self-paired item)
//   hasTag     item -> tag     many-to-many, 1-3 distinct tags per item,
//                              drawn from the parity-matching half of the
//                              tag pool
//
// Same-parity pairing and parity-pooled tags make the held-out class of an
// item recoverable from its neighborhood, which is what gives the graph a
// learnable signal for the training and classification self-tests.
//
// Total triples = entities_per_type * 2 + sum of tag fan-outs; the split is
// a seeded shuffle cut 80/5/5/10 into learn/validation/tuning/test.
// Throws std::invalid_argument when entities_per_type < 4.
DatasetSplits generate_synthetic(std::uint32_t entities_per_type, std::uint64_t seed);

}  // namespace typekg

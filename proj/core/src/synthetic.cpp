#include "typekg/synthetic.hpp"

#include <algorithm>
#include <stdexcept>

#include "typekg/rng.hpp"

namespace typekg {

DatasetSplits generate_synthetic(std::uint32_t entities_per_type, std::uint64_t seed) {
  if (entities_per_type < 4)
    throw std::invalid_argument("synthetic dataset needs at least 4 entities per type");

  const std::uint32_t n = entities_per_type;
  const std::uint32_t n_tags = std::max(4u, 2 * (n / 20));

  DatasetSplits ds;
  ds.label = "synthetic";
  ds.has_tuning = true;

  TypeId item_type = ds.vocab.intern_type("item");
  TypeId label_type = ds.vocab.intern_type("label");
  TypeId tag_type = ds.vocab.intern_type("tag");
  for (std::uint32_t i = 0; i < n; ++i)
    ds.vocab.intern_entity(item_type, "i" + std::to_string(i));
  EntityId even_label = ds.vocab.intern_entity(label_type, "even");
  EntityId odd_label = ds.vocab.intern_entity(label_type, "odd");
  for (std::uint32_t t = 0; t < n_tags; ++t)
    ds.vocab.intern_entity(tag_type, "t" + std::to_string(t));

  RelationId has_class = ds.vocab.intern_relation("hasClass");
  RelationId paired_with = ds.vocab.intern_relation("pairedWith");
  RelationId has_tag = ds.vocab.intern_relation("hasTag");
  ds.signatures = {
      {has_class, item_type, label_type},
      {paired_with, item_type, item_type},
      {has_tag, item_type, tag_type},
  };

  // Same-parity involution: consecutive members of each parity group are
  // partners; a leftover member pairs with itself.
  std::vector<EntityId> partner(n);
  for (std::uint32_t parity = 0; parity < 2; ++parity) {
    std::vector<EntityId> group;
    for (std::uint32_t i = parity; i < n; i += 2) group.push_back(i);
    for (std::size_t j = 0; j + 1 < group.size(); j += 2) {
      partner[group[j]] = group[j + 1];
      partner[group[j + 1]] = group[j];
    }
    if (group.size() % 2 == 1) partner[group.back()] = group.back();
  }

  Rng rng(seed);
  std::vector<TypedTriple> all;
  for (std::uint32_t i = 0; i < n; ++i) {
    EntityRef head{item_type, i};
    all.push_back({head, has_class, {label_type, i % 2 == 0 ? even_label : odd_label}});
    all.push_back({head, paired_with, {item_type, partner[i]}});

    // 1-3 distinct tags from the parity-matching half of the pool
    const std::uint32_t pool = n_tags / 2;
    std::uint32_t fan = 1 + static_cast<std::uint32_t>(rng.bounded(3));
    fan = std::min(fan, pool);
    std::vector<EntityId> chosen;
    while (chosen.size() < fan) {
      EntityId tag = static_cast<EntityId>(2 * rng.bounded(pool) + (i % 2));
      if (std::find(chosen.begin(), chosen.end(), tag) == chosen.end()) chosen.push_back(tag);
    }
    for (EntityId tag : chosen) all.push_back({head, has_tag, {tag_type, tag}});
  }

  for (std::size_t i = all.size(); i > 1; --i)
    std::swap(all[i - 1], all[rng.bounded(i)]);

  const std::size_t n_learn = all.size() * 80 / 100;
  const std::size_t n_valid = all.size() * 5 / 100;
  const std::size_t n_tune = all.size() * 5 / 100;
  auto it = all.begin();
  ds.learn.assign(it, it + n_learn);
  it += n_learn;
  ds.validation.assign(it, it + n_valid);
  it += n_valid;
  ds.tuning.assign(it, it + n_tune);
  it += n_tune;
  ds.test.assign(it, all.end());

  annotate_cardinality(ds.signatures, ds.learn);
  return ds;
}

}  // namespace typekg

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace typekg {

// Dense identifiers assigned in first-seen order at parse time.
// Entity ids are scoped to their type: (TypeId, EntityId) names an entity,
// and the same surface name under two types is two distinct entities.
using TypeId = std::uint32_t;
using EntityId = std::uint32_t;
using RelationId = std::uint32_t;

struct EntityRef {
  TypeId type;
  EntityId entity;
  friend bool operator==(const EntityRef&, const EntityRef&) = default;
};

struct TypedTriple {
  EntityRef head;
  RelationId relation;
  EntityRef tail;
  friend bool operator==(const TypedTriple&, const TypedTriple&) = default;
};

enum class Cardinality { OneToOne, ManyToOne, OneToMany, ManyToMany };

std::string_view to_string(Cardinality c);

// One signature per relation, inferred from the first triple that mentions
// it; every later triple must conform. The cardinality tag and the fan
// averages are descriptive (computed from observed data, never enforced).
struct RelationSignature {
  RelationId relation = 0;
  TypeId domain = 0;
  TypeId range = 0;
  Cardinality cardinality = Cardinality::ManyToMany;
  double tails_per_head = 1.0;
  double heads_per_tail = 1.0;
};

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class signature_conflict_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bijective name<->id tables for types, relations, and per-type entities.
class Vocabulary {
 public:
  TypeId intern_type(std::string_view name);
  RelationId intern_relation(std::string_view name);
  EntityId intern_entity(TypeId type, std::string_view name);

  std::optional<TypeId> find_type(std::string_view name) const;
  std::optional<RelationId> find_relation(std::string_view name) const;
  std::optional<EntityId> find_entity(TypeId type, std::string_view name) const;

  const std::string& type_name(TypeId id) const;
  const std::string& relation_name(RelationId id) const;
  const std::string& entity_name(const EntityRef& ref) const;

  std::uint32_t type_count() const { return static_cast<std::uint32_t>(type_names_.size()); }
  std::uint32_t relation_count() const { return static_cast<std::uint32_t>(relation_names_.size()); }

  // Entities of a type occupy the contiguous id range [0, entity_count(type)).
  std::uint32_t entity_count(TypeId type) const;
  std::uint64_t total_entity_count() const;

 private:
  std::vector<std::string> type_names_;
  std::unordered_map<std::string, TypeId> type_ids_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, RelationId> relation_ids_;
  std::vector<std::vector<std::string>> entity_names_;  // indexed by type
  std::vector<std::unordered_map<std::string, EntityId>> entity_ids_;
};

// Triple file format: UTF-8, one triple per line, three tab-separated
// fields, head and tail encoded as `type:name` (split on the FIRST colon,
// so names may themselves contain colons). Lines starting with `#` and
// blank lines are skipped.
//
//   patient:P01<TAB>hasGender<TAB>gender:male
//
// Parsing appends to the given vocabulary and signature list so that
// several splits can share one id space; `where` labels error messages.
std::vector<TypedTriple> parse_triples(std::istream& in, Vocabulary& vocab,
                                       std::vector<RelationSignature>& signatures,
                                       std::string_view where = "<input>");

// Convenience single-source form.
struct ParsedTriples {
  std::vector<TypedTriple> triples;
  Vocabulary vocab;
  std::vector<RelationSignature> signatures;
};
ParsedTriples parse_triples(std::istream& in, std::string_view where = "<input>");

// Writes triples back in the canonical file format, preserving order.
void write_triples(std::ostream& out, const std::vector<TypedTriple>& triples,
                   const Vocabulary& vocab);

struct DatasetSplits {
  std::string label;
  Vocabulary vocab;
  std::vector<RelationSignature> signatures;
  std::vector<TypedTriple> learn;
  std::vector<TypedTriple> validation;
  std::vector<TypedTriple> tuning;  // empty when the dataset ships none
  std::vector<TypedTriple> test;
  bool has_tuning = false;
  std::vector<std::string> warnings;  // split overlaps, entities unseen in learn
};

// Merges all splits into one vocabulary/signature space. The tuning source
// may be null. Signature conflicts across splits are hard errors; split
// overlaps and non-learn entities that never occur in the learn split are
// recorded as warnings and the triples retained.
DatasetSplits load_dataset(std::istream& learn, std::istream& validation,
                           std::istream* tuning, std::istream& test,
                           std::string_view label = "dataset");

// Dataset manifest: flat key=value file with keys `learn`, `valid`,
// `tune` (optional) and `test` giving triple-file paths, resolved relative
// to the manifest's directory. The label is the manifest filename stem.
DatasetSplits load_dataset_manifest(const std::string& manifest_path);

struct DatasetStats {
  std::uint64_t entities = 0;
  std::uint32_t relations = 0;
  std::uint32_t types = 0;
  std::uint64_t triples_total = 0;
  std::uint64_t triples_learn = 0;
  std::uint64_t triples_validation = 0;
  std::uint64_t triples_tuning = 0;
  std::uint64_t triples_test = 0;
};

DatasetStats dataset_stats(const DatasetSplits& ds);

// Recomputes the descriptive cardinality tags and fan averages of every
// signature from the given triples (the loaders use the learn split).
void annotate_cardinality(std::vector<RelationSignature>& signatures,
                          const std::vector<TypedTriple>& triples);

}  // namespace typekg

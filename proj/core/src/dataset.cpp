#include "typekg/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "typekg/kvconfig.hpp"

namespace typekg {

std::string_view to_string(Cardinality c) {
  switch (c) {
    case Cardinality::OneToOne: return "1-1";
    case Cardinality::ManyToOne: return "n-1";
    case Cardinality::OneToMany: return "1-n";
    case Cardinality::ManyToMany: return "n-n";
  }
  return "?";
}

TypeId Vocabulary::intern_type(std::string_view name) {
  auto it = type_ids_.find(std::string(name));
  if (it != type_ids_.end()) return it->second;
  TypeId id = static_cast<TypeId>(type_names_.size());
  type_names_.emplace_back(name);
  entity_names_.emplace_back();
  entity_ids_.emplace_back();
  type_ids_.emplace(std::string(name), id);
  return id;
}

RelationId Vocabulary::intern_relation(std::string_view name) {
  auto it = relation_ids_.find(std::string(name));
  if (it != relation_ids_.end()) return it->second;
  RelationId id = static_cast<RelationId>(relation_names_.size());
  relation_names_.emplace_back(name);
  relation_ids_.emplace(std::string(name), id);
  return id;
}

EntityId Vocabulary::intern_entity(TypeId type, std::string_view name) {
  auto& ids = entity_ids_.at(type);
  auto it = ids.find(std::string(name));
  if (it != ids.end()) return it->second;
  EntityId id = static_cast<EntityId>(entity_names_[type].size());
  entity_names_[type].emplace_back(name);
  ids.emplace(std::string(name), id);
  return id;
}

std::optional<TypeId> Vocabulary::find_type(std::string_view name) const {
  auto it = type_ids_.find(std::string(name));
  if (it == type_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<RelationId> Vocabulary::find_relation(std::string_view name) const {
  auto it = relation_ids_.find(std::string(name));
  if (it == relation_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<EntityId> Vocabulary::find_entity(TypeId type, std::string_view name) const {
  if (type >= entity_ids_.size()) return std::nullopt;
  auto it = entity_ids_[type].find(std::string(name));
  if (it == entity_ids_[type].end()) return std::nullopt;
  return it->second;
}

const std::string& Vocabulary::type_name(TypeId id) const { return type_names_.at(id); }

const std::string& Vocabulary::relation_name(RelationId id) const {
  return relation_names_.at(id);
}

const std::string& Vocabulary::entity_name(const EntityRef& ref) const {
  return entity_names_.at(ref.type).at(ref.entity);
}

std::uint32_t Vocabulary::entity_count(TypeId type) const {
  if (type >= entity_names_.size())
    throw std::out_of_range("unknown type id " + std::to_string(type));
  return static_cast<std::uint32_t>(entity_names_[type].size());
}

std::uint64_t Vocabulary::total_entity_count() const {
  std::uint64_t n = 0;
  for (const auto& names : entity_names_) n += names.size();
  return n;
}

namespace {

// `type:name`, split on the first colon only (names may contain colons).
EntityRef parse_entity_field(std::string_view field, Vocabulary& vocab,
                             std::string_view where, std::size_t line_no) {
  auto colon = field.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == field.size()) {
    std::ostringstream msg;
    msg << where << ":" << line_no << ": entity field '" << field
        << "' is not of the form type:name";
    throw parse_error(msg.str());
  }
  TypeId type = vocab.intern_type(field.substr(0, colon));
  EntityId entity = vocab.intern_entity(type, field.substr(colon + 1));
  return EntityRef{type, entity};
}

constexpr TypeId kUnsetType = static_cast<TypeId>(-1);

void check_signature(const TypedTriple& t, Vocabulary& vocab,
                     std::vector<RelationSignature>& signatures,
                     std::string_view where, std::size_t line_no) {
  RelationSignature& sig = signatures.at(t.relation);
  if (sig.domain == kUnsetType) {
    sig.relation = t.relation;
    sig.domain = t.head.type;
    sig.range = t.tail.type;
    return;
  }
  if (sig.domain != t.head.type || sig.range != t.tail.type) {
    std::ostringstream msg;
    msg << where << ":" << line_no << ": relation '" << vocab.relation_name(t.relation)
        << "' already has signature (" << vocab.type_name(sig.domain) << " -> "
        << vocab.type_name(sig.range) << ") but this triple has ("
        << vocab.type_name(t.head.type) << " -> " << vocab.type_name(t.tail.type) << ")";
    throw signature_conflict_error(msg.str());
  }
}

}  // namespace

std::vector<TypedTriple> parse_triples(std::istream& in, Vocabulary& vocab,
                                       std::vector<RelationSignature>& signatures,
                                       std::string_view where) {
  std::vector<TypedTriple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    auto tab3 = tab2 == std::string::npos ? std::string::npos : line.find('\t', tab2 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos || tab3 != std::string::npos) {
      std::ostringstream msg;
      msg << where << ":" << line_no << ": expected three tab-separated fields";
      throw parse_error(msg.str());
    }
    std::string_view view(line);
    std::string_view head_field = view.substr(0, tab1);
    std::string_view rel_field = view.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string_view tail_field = view.substr(tab2 + 1);
    if (rel_field.empty()) {
      std::ostringstream msg;
      msg << where << ":" << line_no << ": empty relation field";
      throw parse_error(msg.str());
    }

    EntityRef head = parse_entity_field(head_field, vocab, where, line_no);
    RelationId rel = vocab.intern_relation(rel_field);
    if (rel >= signatures.size()) {
      std::size_t old_size = signatures.size();
      signatures.resize(rel + 1);
      for (std::size_t i = old_size; i < signatures.size(); ++i)
        signatures[i].domain = kUnsetType;
    }
    EntityRef tail = parse_entity_field(tail_field, vocab, where, line_no);

    TypedTriple triple{head, rel, tail};
    check_signature(triple, vocab, signatures, where, line_no);
    triples.push_back(triple);
  }
  return triples;
}

ParsedTriples parse_triples(std::istream& in, std::string_view where) {
  ParsedTriples out;
  out.triples = parse_triples(in, out.vocab, out.signatures, where);
  annotate_cardinality(out.signatures, out.triples);
  return out;
}

void write_triples(std::ostream& out, const std::vector<TypedTriple>& triples,
                   const Vocabulary& vocab) {
  for (const auto& t : triples) {
    out << vocab.type_name(t.head.type) << ':' << vocab.entity_name(t.head) << '\t'
        << vocab.relation_name(t.relation) << '\t' << vocab.type_name(t.tail.type) << ':'
        << vocab.entity_name(t.tail) << '\n';
  }
}

void annotate_cardinality(std::vector<RelationSignature>& signatures,
                          const std::vector<TypedTriple>& triples) {
  // fan-out: distinct tails per head; fan-in: distinct heads per tail
  std::vector<std::map<EntityId, std::set<EntityId>>> by_head(signatures.size());
  std::vector<std::map<EntityId, std::set<EntityId>>> by_tail(signatures.size());
  for (const auto& t : triples) {
    by_head[t.relation][t.head.entity].insert(t.tail.entity);
    by_tail[t.relation][t.tail.entity].insert(t.head.entity);
  }
  for (std::size_t r = 0; r < signatures.size(); ++r) {
    if (by_head[r].empty()) continue;
    std::size_t max_out = 0, sum_out = 0;
    for (const auto& [h, tails] : by_head[r]) {
      max_out = std::max(max_out, tails.size());
      sum_out += tails.size();
    }
    std::size_t max_in = 0, sum_in = 0;
    for (const auto& [t, heads] : by_tail[r]) {
      max_in = std::max(max_in, heads.size());
      sum_in += heads.size();
    }
    bool one_out = max_out <= 1;
    bool one_in = max_in <= 1;
    signatures[r].cardinality = one_out ? (one_in ? Cardinality::OneToOne : Cardinality::ManyToOne)
                                        : (one_in ? Cardinality::OneToMany : Cardinality::ManyToMany);
    signatures[r].tails_per_head =
        static_cast<double>(sum_out) / static_cast<double>(by_head[r].size());
    signatures[r].heads_per_tail =
        static_cast<double>(sum_in) / static_cast<double>(by_tail[r].size());
  }
}

namespace {

struct TripleKey {
  bool operator<(const TripleKey& o) const {
    return std::tie(ht, h, r, tt, t) < std::tie(o.ht, o.h, o.r, o.tt, o.t);
  }
  TypeId ht;
  EntityId h;
  RelationId r;
  TypeId tt;
  EntityId t;
};

TripleKey key_of(const TypedTriple& t) {
  return {t.head.type, t.head.entity, t.relation, t.tail.type, t.tail.entity};
}

}  // namespace

DatasetSplits load_dataset(std::istream& learn, std::istream& validation,
                           std::istream* tuning, std::istream& test,
                           std::string_view label) {
  DatasetSplits ds;
  ds.label = std::string(label);
  ds.learn = parse_triples(learn, ds.vocab, ds.signatures, "learn");
  ds.validation = parse_triples(validation, ds.vocab, ds.signatures, "valid");
  if (tuning != nullptr) {
    ds.tuning = parse_triples(*tuning, ds.vocab, ds.signatures, "tune");
    ds.has_tuning = true;
  }
  ds.test = parse_triples(test, ds.vocab, ds.signatures, "test");
  annotate_cardinality(ds.signatures, ds.learn);

  // Split overlap is suspicious but the published files win: warn, keep.
  const std::vector<std::pair<const std::vector<TypedTriple>*, const char*>> splits = {
      {&ds.learn, "learn"}, {&ds.validation, "valid"}, {&ds.tuning, "tune"}, {&ds.test, "test"}};
  std::map<TripleKey, const char*> seen;
  for (const auto& [list, name] : splits) {
    for (const auto& t : *list) {
      auto [it, inserted] = seen.emplace(key_of(t), name);
      if (!inserted && it->second != name) {
        std::ostringstream msg;
        msg << "triple (" << ds.vocab.type_name(t.head.type) << ':'
            << ds.vocab.entity_name(t.head) << ", " << ds.vocab.relation_name(t.relation)
            << ", " << ds.vocab.type_name(t.tail.type) << ':' << ds.vocab.entity_name(t.tail)
            << ") appears in both '" << it->second << "' and '" << name << "'";
        ds.warnings.push_back(msg.str());
      }
    }
  }

  std::set<std::pair<TypeId, EntityId>> in_learn;
  for (const auto& t : ds.learn) {
    in_learn.emplace(t.head.type, t.head.entity);
    in_learn.emplace(t.tail.type, t.tail.entity);
  }
  for (std::size_t i = 1; i < splits.size(); ++i) {
    for (const auto& t : *splits[i].first) {
      for (const EntityRef& ref : {t.head, t.tail}) {
        if (!in_learn.count({ref.type, ref.entity})) {
          std::ostringstream msg;
          msg << "entity " << ds.vocab.type_name(ref.type) << ':' << ds.vocab.entity_name(ref)
              << " occurs in '" << splits[i].second << "' but never in the learn split";
          ds.warnings.push_back(msg.str());
          in_learn.emplace(ref.type, ref.entity);  // one warning per entity
        }
      }
    }
  }
  return ds;
}

DatasetSplits load_dataset_manifest(const std::string& manifest_path) {
  namespace fs = std::filesystem;
  KvConfig kv = KvConfig::from_file(manifest_path);
  fs::path base = fs::path(manifest_path).parent_path();
  auto open = [&](const std::string& key) {
    fs::path p = base / kv.require(key);
    auto stream = std::make_unique<std::ifstream>(p);
    if (!*stream) throw std::runtime_error("cannot open " + p.string() + " (key '" + key + "')");
    return stream;
  };
  auto learn = open("learn");
  auto valid = open("valid");
  auto test = open("test");
  std::unique_ptr<std::ifstream> tune;
  if (kv.get("tune")) tune = open("tune");
  std::string label = fs::path(manifest_path).stem().string();
  return load_dataset(*learn, *valid, tune ? tune.get() : nullptr, *test, label);
}

DatasetStats dataset_stats(const DatasetSplits& ds) {
  DatasetStats s;
  s.entities = ds.vocab.total_entity_count();
  s.relations = ds.vocab.relation_count();
  s.types = ds.vocab.type_count();
  s.triples_learn = ds.learn.size();
  s.triples_validation = ds.validation.size();
  s.triples_tuning = ds.tuning.size();
  s.triples_test = ds.test.size();
  s.triples_total = s.triples_learn + s.triples_validation + s.triples_tuning + s.triples_test;
  return s;
}

}  // namespace typekg

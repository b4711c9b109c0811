#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "typekg/kvconfig.hpp"
#include "typekg/text.hpp"

using namespace typekg;
using typekg::testing::parse_text;

TEST_SUITE_BEGIN("dataset");

TEST_CASE("single categorized triple") {
  auto parsed = parse_text("patient:P01\thasGender\tgender:male\n");
  REQUIRE(parsed.triples.size() == 1);
  CHECK(parsed.vocab.type_count() == 2);
  CHECK(parsed.vocab.relation_count() == 1);
  CHECK(parsed.vocab.type_name(0) == "patient");
  CHECK(parsed.vocab.type_name(1) == "gender");
  CHECK(parsed.vocab.entity_name(parsed.triples[0].head) == "P01");
  CHECK(parsed.vocab.entity_name(parsed.triples[0].tail) == "male");
  const auto& sig = parsed.signatures[parsed.triples[0].relation];
  CHECK(parsed.vocab.type_name(sig.domain) == "patient");
  CHECK(parsed.vocab.type_name(sig.range) == "gender");
}

TEST_CASE("empty input gives empty dataset") {
  auto parsed = parse_text("");
  CHECK(parsed.triples.empty());
  CHECK(parsed.vocab.type_count() == 0);
  CHECK(parsed.vocab.relation_count() == 0);
}

TEST_CASE("comments and blank lines are skipped") {
  auto parsed = parse_text("# header\n\na:x\tr\tb:y\n   \n# tail comment\n");
  CHECK(parsed.triples.size() == 1);
}

TEST_CASE("signature conflict names the relation and both types") {
  CHECK_THROWS_WITH_AS(parse_text("a:x\tr\tb:y\na:x\tr\tc:z\n"),
                       doctest::Contains("'r'"), signature_conflict_error);
  try {
    parse_text("a:x\tr\tb:y\na:x\tr\tc:z\n");
  } catch (const signature_conflict_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("b") != std::string::npos);
    CHECK(msg.find("c") != std::string::npos);
  }
}

TEST_CASE("domain conflicts are caught as well") {
  CHECK_THROWS_AS(parse_text("a:x\tr\tb:y\nc:z\tr\tb:y\n"), signature_conflict_error);
}

TEST_CASE("entity names may contain colons past the first") {
  auto parsed = parse_text("icd:A10:5\tcodes\tb:m.0123:x\n");
  REQUIRE(parsed.triples.size() == 1);
  CHECK(parsed.vocab.entity_name(parsed.triples[0].head) == "A10:5");
  CHECK(parsed.vocab.entity_name(parsed.triples[0].tail) == "m.0123:x");
}

TEST_CASE("malformed lines report the line number") {
  CHECK_THROWS_WITH_AS(parse_text("a:x\tr\tb:y\nnot a triple\n"), doctest::Contains(":2:"),
                       parse_error);
  CHECK_THROWS_AS(parse_text("a:x\tr\tb:y\textra\tfield\n"), parse_error);
  CHECK_THROWS_AS(parse_text("noType\tr\tb:y\n"), parse_error);
  CHECK_THROWS_AS(parse_text(":empty\tr\tb:y\n"), parse_error);
  CHECK_THROWS_AS(parse_text("a:\tr\tb:y\n"), parse_error);
}

TEST_CASE("round-trip preserves ids and triples") {
  const std::string text =
      "patient:P01\thasGender\tgender:male\n"
      "patient:P02\thasGender\tgender:female\n"
      "patient:P01\tinSocialGroup\tsocialGroup:g1\n"
      "patient:P02\tinSocialGroup\tsocialGroup:g1\n";
  auto first = parse_text(text);
  std::ostringstream out;
  write_triples(out, first.triples, first.vocab);
  auto second = parse_text(out.str());
  CHECK(first.triples == second.triples);
  CHECK(second.vocab.type_count() == first.vocab.type_count());
  CHECK(second.vocab.relation_count() == first.vocab.relation_count());
  for (TypeId t = 0; t < first.vocab.type_count(); ++t) {
    CHECK(first.vocab.type_name(t) == second.vocab.type_name(t));
    CHECK(first.vocab.entity_count(t) == second.vocab.entity_count(t));
  }
}

TEST_CASE("type soundness holds over parsed triples") {
  auto parsed = parse_text(
      "a:x\tr\tb:y\n"
      "a:z\tr\tb:y\n"
      "b:y\ts\ta:x\n");
  for (const auto& t : parsed.triples) {
    const auto& sig = parsed.signatures[t.relation];
    CHECK(t.head.type == sig.domain);
    CHECK(t.tail.type == sig.range);
  }
}

TEST_CASE("cardinality tags are descriptive") {
  auto parsed = parse_text(
      "a:1\tone2one\tb:1\n"
      "a:2\tone2one\tb:2\n"
      "a:1\tmany2one\tb:1\n"
      "a:2\tmany2one\tb:1\n"
      "a:1\tmany2many\tb:1\n"
      "a:1\tmany2many\tb:2\n"
      "a:2\tmany2many\tb:1\n");
  auto rel = [&](const char* name) {
    return parsed.signatures[*parsed.vocab.find_relation(name)];
  };
  CHECK(rel("one2one").cardinality == Cardinality::OneToOne);
  CHECK(rel("many2one").cardinality == Cardinality::ManyToOne);
  CHECK(rel("many2many").cardinality == Cardinality::ManyToMany);
}

TEST_CASE("entity pools are dense per type") {
  auto parsed = parse_text("t:e1\tr\tu:x\nt:e2\tr\tu:x\nt:e3\tr\tu:x\n");
  TypeId t = *parsed.vocab.find_type("t");
  CHECK(parsed.vocab.entity_count(t) == 3);
  CHECK_THROWS_AS(parsed.vocab.entity_count(99), std::out_of_range);
}

TEST_CASE("load_dataset merges splits and records warnings") {
  std::istringstream learn("a:x\tr\tb:y\na:z\tr\tb:y\n");
  std::istringstream valid("a:x\tr\tb:y\n");
  std::istringstream tune("a:z\tr\tb:y\n");
  std::istringstream test("a:w\tr\tb:v\n");
  auto ds = load_dataset(learn, valid, &tune, test, "demo");
  CHECK(ds.learn.size() == 2);
  CHECK(ds.validation.size() == 1);
  CHECK(ds.tuning.size() == 1);
  CHECK(ds.test.size() == 1);
  CHECK(ds.has_tuning);
  // valid/tune duplicate learn triples; test introduces entities unseen in learn
  REQUIRE(ds.warnings.size() >= 3);
  bool overlap = false, unseen = false;
  for (const auto& w : ds.warnings) {
    if (w.find("appears in both") != std::string::npos) overlap = true;
    if (w.find("never in the learn split") != std::string::npos) unseen = true;
  }
  CHECK(overlap);
  CHECK(unseen);
}

TEST_CASE("four identical one-line files load with disjointness warnings") {
  std::istringstream learn("a:x\tr\tb:y\n"), valid("a:x\tr\tb:y\n"), tune("a:x\tr\tb:y\n"),
      test("a:x\tr\tb:y\n");
  auto ds = load_dataset(learn, valid, &tune, test);
  CHECK(ds.learn.size() == 1);
  CHECK(ds.validation.size() == 1);
  CHECK(ds.tuning.size() == 1);
  CHECK(ds.test.size() == 1);
  CHECK(!ds.warnings.empty());
}

TEST_CASE("cross-split signature conflict is a hard error") {
  std::istringstream learn("a:x\tr\tb:y\n");
  std::istringstream valid("a:x\tr\tc:y\n");
  std::istringstream test("a:x\tr\tb:y\n");
  CHECK_THROWS_AS(load_dataset(learn, valid, nullptr, test), signature_conflict_error);
}

TEST_CASE("tuning split is optional") {
  std::istringstream learn("a:x\tr\tb:y\n"), valid("a:x\tr\tb:y\n"), test("a:x\tr\tb:y\n");
  auto ds = load_dataset(learn, valid, nullptr, test);
  CHECK_FALSE(ds.has_tuning);
  CHECK(ds.tuning.empty());
}

TEST_CASE("dataset_stats counts every split") {
  std::istringstream learn("a:x\tr\tb:y\na:z\tr\tb:y\n");
  std::istringstream valid("a:x\tr\tb:y\n");
  std::istringstream test("a:x\tr\tb:y\n");
  auto ds = load_dataset(learn, valid, nullptr, test);
  auto stats = dataset_stats(ds);
  CHECK(stats.entities == 3);  // a:x, a:z, b:y
  CHECK(stats.relations == 1);
  CHECK(stats.types == 2);
  CHECK(stats.triples_learn == 2);
  CHECK(stats.triples_validation == 1);
  CHECK(stats.triples_tuning == 0);
  CHECK(stats.triples_test == 1);
  CHECK(stats.triples_total == 4);
}

TEST_CASE("stats of an empty dataset are all zero") {
  std::istringstream learn(""), valid(""), test("");
  auto ds = load_dataset(learn, valid, nullptr, test);
  auto stats = dataset_stats(ds);
  CHECK(stats.entities == 0);
  CHECK(stats.relations == 0);
  CHECK(stats.types == 0);
  CHECK(stats.triples_total == 0);
}

TEST_CASE("manifest loading resolves paths and labels") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "typekg_manifest_test";
  fs::create_directories(dir);
  for (const char* name : {"learn.tsv", "valid.tsv", "test.tsv"}) {
    std::ofstream f(dir / name);
    f << "a:x\tr\tb:y\n";
  }
  {
    std::ofstream m(dir / "demo.manifest");
    m << "learn=learn.tsv\nvalid=valid.tsv\ntest=test.tsv\n";
  }
  auto ds = load_dataset_manifest((dir / "demo.manifest").string());
  CHECK(ds.label == "demo");
  CHECK_FALSE(ds.has_tuning);
  CHECK(ds.learn.size() == 1);
  fs::remove_all(dir);
}

TEST_CASE("kvconfig parses, trims and overrides") {
  auto kv = KvConfig::from_string("# comment\nkey = value\nnum= 3\nkey=second\n");
  CHECK(kv.require("key") == "second");
  CHECK(kv.get_int("num", 0) == 3);
  CHECK(kv.get_or("absent", "d") == "d");
  CHECK_FALSE(kv.get("absent").has_value());
  CHECK_THROWS(kv.require("absent"));
  CHECK_THROWS(KvConfig::from_string("no equals sign\n"));
  CHECK_THROWS(kv.get_int("key", 0));
}

TEST_CASE("double formatting round-trips exactly") {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.bounded(12)));
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK_THROWS(parse_double("12x"));
}

TEST_CASE("csv escaping round-trips through the splitter") {
  std::string tricky = "a,\"b\"\nc";
  std::string line = csv_escape(tricky) + "," + csv_escape("plain");
  auto fields = split_csv_line(line);
  REQUIRE(fields.size() == 2);
  CHECK(fields[0] == tricky);
  CHECK(fields[1] == "plain");
}

TEST_SUITE_END();

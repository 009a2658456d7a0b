#include <doctest.h>

#include "isaid/corpus.hpp"
#include "isaid/error.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace isaid;
using namespace isaid::corpus;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("isaid_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Corpus labelled(std::size_t classes, std::size_t per_class) {
  std::vector<Document> docs;
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      docs.push_back({{static_cast<std::uint8_t>(c), static_cast<std::uint8_t>(i)},
                      "c" + std::to_string(c),
                      std::to_string(c) + ":" + std::to_string(i)});
    }
  }
  return Corpus(std::move(docs));
}

std::set<std::string> ids(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& d : c.documents()) out.insert(d.id);
  return out;
}

std::size_t zero_runs(const Corpus& c, std::size_t width) {
  std::size_t runs = 0;
  for (const auto& d : c.documents()) {
    std::size_t run = 0;
    for (auto b : d.payload) {
      run = b == 0 ? run + 1 : 0;
      if (run == width) ++runs;
    }
  }
  return runs;
}

}  // namespace

TEST_CASE("corpus jsonl ingest decodes Base64 payloads") {
  std::istringstream in(R"({"label":"arm","data_b64":"10PURNZE2EU="})" "\n");
  const auto c = read_jsonl(in);
  REQUIRE(c.size() == 1);
  CHECK(c[0].payload == std::vector<std::uint8_t>{0xd7, 0x43, 0xd4, 0x44, 0xd6, 0x44, 0xd8, 0x45});
  CHECK(c[0].label == "arm");
  CHECK(c[0].id == "1");
  CHECK(c.label_set() == std::vector<std::string>{"arm"});
}

TEST_CASE("corpus jsonl skips malformed records") {
  std::istringstream in(
      "{\"label\":\"a\",\"data_b64\":\"AAE=\",\"id\":\"x\"}\n"
      "not json\n"
      "{\"label\":\"a\",\"data_b64\":\"@@@\"}\n"
      "{\"label\":\"a\",\"data_b64\":\"\"}\n"
      "{\"data_b64\":\"AQI=\"}\n");
  IngestStats stats;
  const auto c = read_jsonl(in, &stats);
  CHECK(c.size() == 2);
  CHECK(stats.accepted == 2);
  CHECK(stats.skipped == 3);
  CHECK_FALSE(c[1].label.has_value());
  CHECK(c[1].id == "5");
}

TEST_CASE("corpus empty jsonl is an error") {
  std::istringstream in("");
  CHECK_THROWS_WITH_AS(read_jsonl(in), doctest::Contains("zero valid records"), DataError);
}

TEST_CASE("corpus directory ingest") {
  TempDir dir("dir_ingest");
  for (const char* label : {"mips", "arm"}) {
    fs::create_directories(dir.path / label);
    for (int i = 0; i < 3; ++i) {
      std::ofstream(dir.path / label / ("f" + std::to_string(i)), std::ios::binary) << "\x01\x02" << i;
    }
  }
  const auto c = ingest(dir.path, Format::directory);
  CHECK(c.size() == 6);
  CHECK(c.label_set() == std::vector<std::string>{"arm", "mips"});
  CHECK(c[0].id == "arm/f0");
  CHECK(c[0].payload == std::vector<std::uint8_t>{1, 2, '0'});
}

TEST_CASE("corpus rejects duplicate ids") {
  CHECK_THROWS_AS(Corpus({{{1}, "a", "x"}, {{2}, "a", "x"}}), DataError);
}

TEST_CASE("corpus jsonl export round-trips") {
  const auto c = generate_synthetic(default_isa_specs(3), 5, 40, 3);
  std::stringstream buf;
  write_jsonl(c, buf);
  const auto back = read_jsonl(buf);
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back[i].payload == c[i].payload);
    CHECK(back[i].label == c[i].label);
    CHECK(back[i].id == c[i].id);
  }
}

TEST_CASE("corpus split sizes, stratification and determinism") {
  const auto c = labelled(12, 318);
  const SplitSpec spec{238, 80, 5, 50};
  const auto s = split(c, spec, 0);
  CHECK(s.train.size() == 2856);
  CHECK(s.test.size() == 960);
  for (const auto& label : c.label_set()) {
    CHECK(s.train.indices_of(label).size() == 238);
    CHECK(s.test.indices_of(label).size() == 80);
  }
  const auto train_ids = ids(s.train);
  for (const auto& d : s.test.documents()) CHECK_FALSE(train_ids.count(d.id));

  const auto again = split(c, spec, 0);
  CHECK(ids(again.train) == train_ids);
  CHECK(again.train[0].id == s.train[0].id);
  CHECK(ids(split(c, spec, 1).train) != train_ids);
  CHECK_FALSE(repeats_are_disjoint(c, spec));
}

TEST_CASE("corpus split uses disjoint blocks when the corpus is large enough") {
  const auto c = labelled(2, 60);
  const SplitSpec spec{8, 4, 1, 5};
  REQUIRE(repeats_are_disjoint(c, spec));
  std::set<std::string> seen;
  for (std::size_t r = 0; r < spec.repeats; ++r) {
    const auto s = split(c, spec, r);
    for (const auto& d : s.train.documents()) CHECK(seen.insert(d.id).second);
    for (const auto& d : s.test.documents()) CHECK(seen.insert(d.id).second);
  }
}

TEST_CASE("corpus split preconditions") {
  const auto c = labelled(2, 10);
  CHECK_THROWS_AS(split(c, SplitSpec{9, 2, 0, 1}, 0), DataError);
  CHECK_THROWS_AS(validate(SplitSpec{2, 2, 0, 0}, c), std::invalid_argument);
  CHECK_THROWS_AS(split(c, SplitSpec{2, 2, 0, 3}, 3), std::invalid_argument);
  const Corpus unlabeled({{{1}, std::nullopt, "u"}});
  CHECK_THROWS_AS(validate(SplitSpec{1, 0, 0, 1}, unlabeled), DataError);
}

TEST_CASE("corpus synthetic generator shape and determinism") {
  const auto specs = default_isa_specs();
  REQUIRE(specs.size() == 12);
  const auto c = generate_synthetic(specs, 318, 66, 7);
  CHECK(c.size() == 3816);
  CHECK(c.label_set().size() == 12);
  for (const auto& d : c.documents()) {
    CHECK(d.payload.size() >= 66);
    CHECK(d.payload.size() <= 72);
  }
  const auto again = generate_synthetic(specs, 318, 66, 7);
  for (std::size_t i = 0; i < c.size(); ++i) REQUIRE(again[i].payload == c[i].payload);
  CHECK(generate_synthetic(specs, 318, 66, 8)[0].payload != c[0].payload);
}

TEST_CASE("corpus synthetic big-endian immediates") {
  SyntheticIsaSpec spec;
  spec.name = "be";
  spec.instruction_width = 4;
  spec.opcode_distribution = {{{0x12}, 0.5}, {{0x34}, 0.5}};
  spec.endianness = Endianness::big;
  spec.immediate_small_value_prob = 1.0;
  const std::vector<SyntheticIsaSpec> specs{spec};
  const auto c = generate_synthetic(specs, 20, 64, 1);
  for (const auto& d : c.documents()) {
    for (std::size_t i = 0; i + 4 <= d.payload.size(); i += 4) {
      CHECK(d.payload[i + 2] == 0x00);
      CHECK(d.payload[i + 3] == 0x01);
    }
  }
}

TEST_CASE("corpus synthetic zero-run noise") {
  auto quiet = default_isa_specs();
  auto noisy = quiet;
  for (auto& s : quiet) s.noise_zero_prob = 0.0;
  for (auto& s : noisy) s.noise_zero_prob = 0.5;
  const auto a = generate_synthetic(quiet, 100, 66, 2);
  const auto b = generate_synthetic(noisy, 100, 66, 2);
  CHECK(zero_runs(b, 4) > 4 * zero_runs(a, 4) + 100);
}

TEST_CASE("corpus synthetic spec validation") {
  SyntheticIsaSpec spec;
  spec.name = "bad";
  spec.opcode_distribution = {{{0x01}, 0.4}, {{0x02}, 0.4}};
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
  spec.opcode_distribution = {{{0x01}, 0.5}, {{0x02}, 0.5}};
  CHECK_NOTHROW(validate(spec));
  spec.instruction_width = 3;
  CHECK_THROWS_AS(validate(spec), std::invalid_argument);
}

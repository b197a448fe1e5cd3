#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "sclink/config.hpp"
#include "sclink/scenario.hpp"

using namespace sclink;

TEST_CASE("typed accessors on a nested mapping") {
  auto root = parse_config_text(
      "name: demo\n"
      "seed: 42\n"
      "gain: -3.5\n"
      "flag: true\n"
      "frame:\n"
      "  data: 256\n"
      "sweep:\n"
      "  esn0_db: [10, 20.5]\n"
      "tags: [a, b]\n"
      "coeffs:\n"
      "  - [1.0, -2.0]\n"
      "  - [0.5, 0.25]\n",
      "inline");
  CHECK(root.text("name") == "demo");
  CHECK(root.uinteger("seed") == 42);
  CHECK(root.integer_or("seed2", -7) == -7);
  CHECK(root.number("gain") == doctest::Approx(-3.5));
  CHECK(root.boolean_or("flag", false) == true);
  CHECK(root.boolean_or("missing_flag", true) == true);
  CHECK(root.has("frame"));
  CHECK_FALSE(root.has("nothing"));

  auto frame = root.map("frame");
  CHECK(frame.uinteger("data") == 256);
  frame.done();

  auto sweep = root.map("sweep");
  const auto esn0 = sweep.number_list("esn0_db");
  REQUIRE(esn0.size() == 2);
  CHECK(esn0[0] == doctest::Approx(10.0));
  CHECK(esn0[1] == doctest::Approx(20.5));
  sweep.done();

  const auto tags = root.text_list("tags");
  REQUIRE(tags.size() == 2);
  CHECK(tags[0] == "a");

  const auto coeffs = root.complex_list("coeffs");
  REQUIRE(coeffs.size() == 2);
  CHECK(coeffs[0].first == doctest::Approx(1.0));
  CHECK(coeffs[0].second == doctest::Approx(-2.0));
  CHECK(coeffs[1].second == doctest::Approx(0.25));

  root.done();
}

TEST_CASE("unknown keys are rejected with their location") {
  auto root = parse_config_text("known: 1\nmystery_key: 2\n", "myfile.yaml");
  root.integer("known");
  try {
    root.done();
    FAIL("done() accepted an unconsumed key");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("mystery_key") != std::string::npos);
    CHECK(msg.find("myfile.yaml") != std::string::npos);
    CHECK(msg.find(":2") != std::string::npos);  // 1-based line of the key
  }
}

TEST_CASE("unknown keys inside nested maps are also rejected") {
  auto root = parse_config_text("frame:\n  data: 8\n  oops: 1\n", "f.yaml");
  auto frame = root.map("frame");
  frame.uinteger("data");
  CHECK_THROWS_AS(frame.done(), ConfigError);
  try {
    auto r2 = parse_config_text("frame:\n  data: 8\n  oops: 1\n", "f.yaml");
    auto f2 = r2.map("frame");
    f2.uinteger("data");
    f2.done();
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("oops") != std::string::npos);
    CHECK(msg.find("f.yaml:3") != std::string::npos);
  }
}

TEST_CASE("wrong value shapes raise errors naming the key") {
  auto root = parse_config_text("x: [1, 2]\ny: hello\nm: 3\n", "t.yaml");
  CHECK_THROWS_AS(root.number("x"), ConfigError);    // sequence where scalar expected
  CHECK_THROWS_AS(root.number("y"), ConfigError);    // non-numeric scalar
  CHECK_THROWS_AS(root.map("m"), ConfigError);       // scalar where mapping expected
  CHECK_THROWS_AS(root.number_list("y"), ConfigError);
  CHECK_THROWS_AS(root.number("absent"), ConfigError);
}

TEST_CASE("integers refuse fractional and negative-as-unsigned values") {
  auto root = parse_config_text("f: 2.5\nneg: -3\n", "t.yaml");
  CHECK_THROWS_AS(root.integer("f"), ConfigError);
  CHECK_THROWS_AS(root.uinteger("neg"), ConfigError);
  auto root2 = parse_config_text("neg: -3\n", "t.yaml");
  CHECK(root2.integer("neg") == -3);
}

TEST_CASE("empty text parses to an empty mapping") {
  auto root = parse_config_text("", "empty.yaml");
  CHECK_FALSE(root.has("anything"));
  CHECK(root.number_or("x", 1.5) == doctest::Approx(1.5));
  root.done();
}

TEST_CASE("scenario defaults and overrides") {
  auto root = parse_config_text(
      "qam_order: 16\n"
      "seed: 9\n"
      "frame:\n"
      "  data: 128\n"
      "  train: 64\n"
      "sweep:\n"
      "  backoff_db: [5]\n"
      "  esn0_db: [30]\n"
      "  blocks: 2\n"
      "variants: [conventional, mm]\n"
      "detectors: [nominal, dassd]\n",
      "inline");
  const Scenario s = scenario_from_config(root);
  CHECK(s.qam_order == 16);
  CHECK(s.seed == 9);
  CHECK(s.n_data == 128);
  CHECK(s.n_ft == 64);
  CHECK(s.n_cp == 64);  // untouched default
  CHECK(s.backoff_db == std::vector<double>{5.0});
  CHECK(s.n_blocks == 2);
  REQUIRE(s.variants.size() == 2);
  CHECK(s.variants[0] == PostdistKind::conventional);
  CHECK(s.variants[1] == PostdistKind::mm);
  REQUIRE(s.detectors.size() == 2);
  CHECK(s.detectors[1] == DetectorKind::dassd);
  s.validate();
}

TEST_CASE("preset base plus override") {
  auto root = parse_config_text("preset: scenario1-desk\nseed: 77\n", "inline");
  const Scenario s = scenario_from_config(root);
  CHECK(s.seed == 77);
  CHECK(s.qam_order == 64);
  CHECK(s.n_data == 1024);
  CHECK(s.variants.size() == 5);

  auto bad = parse_config_text("preset: not-a-preset\n", "inline");
  CHECK_THROWS(scenario_from_config(bad));
}

TEST_CASE("bad enum values are rejected") {
  auto bad_variant = parse_config_text("variants: [conventional, frobnicator]\n", "inline");
  CHECK_THROWS(scenario_from_config(bad_variant));
  auto bad_det = parse_config_text("detectors: [wat]\n", "inline");
  CHECK_THROWS(scenario_from_config(bad_det));
  CHECK_THROWS(postdist_from_string("x"));
  CHECK_THROWS(detector_from_string("x"));
  CHECK(postdist_from_string("gpr") == PostdistKind::gpr);
  CHECK(detector_from_string("dassd") == DetectorKind::dassd);
  CHECK(to_string(PostdistKind::volterra) == "volterra");
  CHECK(to_string(DetectorKind::best) == "best");
}

TEST_CASE("pa blocks map to amplifier models") {
  auto saleh = parse_config_text("pa:\n  model: saleh\n  a_sat: 2.0\n", "inline");
  const Scenario s1 = scenario_from_config(saleh);
  REQUIRE(std::holds_alternative<SalehParams>(s1.pa));
  CHECK(std::get<SalehParams>(s1.pa).a_sat == doctest::Approx(2.0));

  auto lin = parse_config_text("pa:\n  model: linear\n", "inline");
  CHECK(std::holds_alternative<LinearPa>(scenario_from_config(lin).pa));

  auto mp = parse_config_text(
      "pa:\n"
      "  model: memory_poly\n"
      "  kb: 2\n"
      "  pb: 1\n"
      "  pc: 1\n"
      "  coeffs: [[1, 0], [0.1, 0]]\n",
      "inline");
  const Scenario s3 = scenario_from_config(mp);
  REQUIRE(std::holds_alternative<MemoryPolyParams>(s3.pa));
  CHECK(std::get<MemoryPolyParams>(s3.pa).kb == 2);

  auto mp_default = parse_config_text("pa:\n  model: memory_poly\n", "inline");
  const Scenario s4 = scenario_from_config(mp_default);
  REQUIRE(std::holds_alternative<MemoryPolyParams>(s4.pa));
  CHECK(std::get<MemoryPolyParams>(s4.pa).kb == 3);

  auto bad = parse_config_text("pa:\n  model: tube\n", "inline");
  CHECK_THROWS(scenario_from_config(bad));
}

TEST_CASE("scenario validation rejects inconsistent settings") {
  Scenario s = preset_scenario("scenario1-desk");
  s.validate();

  Scenario bad = s;
  bad.qam_order = 3;
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.rrc_span = 15;
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.n_cp = 2;  // shorter than csi post extent - 1
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.gpr_segments = 100;  // 100 * 1024 > n_st
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.n_st = 100;  // far below 10x the network parameter count
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.backoff_db = {};
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.backoff_db = {-1.0};
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.pa = LinearPa{};
  CHECK_THROWS(bad.validate());  // multi-entry backoff sweep is meaningless

  bad = s;
  bad.variants.clear();
  CHECK_THROWS(bad.validate());

  bad = s;
  bad.outage_threshold_bits = -1.0;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("every built-in preset validates") {
  for (const auto& name : preset_names()) {
    INFO(name);
    CHECK_NOTHROW(preset_scenario(name).validate());
  }
  CHECK(preset_names().size() >= 4);
  CHECK_THROWS(preset_scenario("nope"));
}

TEST_CASE("canonical text and hash are stable and sensitive") {
  const Scenario a = preset_scenario("scenario1-desk");
  const Scenario b = preset_scenario("scenario1-desk");
  CHECK(canonical_config_text(a) == canonical_config_text(b));
  CHECK(config_hash(a) == config_hash(b));

  Scenario c = a;
  c.seed = a.seed + 1;
  CHECK(config_hash(c) != config_hash(a));

  Scenario d = a;
  d.esn0_db.push_back(51.0);
  CHECK(config_hash(d) != config_hash(a));

  const std::string text = canonical_config_text(a);
  CHECK(text.find("qam_order=64") != std::string::npos);
  CHECK(text.find("seed=") != std::string::npos);
}

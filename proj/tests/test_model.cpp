#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"

using namespace fogran;

TEST(ScenarioConfig, DefaultsValidate) {
  ScenarioConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.cache_size(), 9u);  // round(0.6 * 15)
}

TEST(ScenarioConfig, ErrorsNameTheField) {
  auto field_of = [](ScenarioConfig c) {
    try {
      c.validate();
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  ScenarioConfig c;
  c.num_users = 0;
  EXPECT_EQ(field_of(c), "num_users");
  c = {};
  c.num_files = 65;
  EXPECT_EQ(field_of(c), "num_files");
  c = {};
  c.file_size_bits = -1;
  EXPECT_EQ(field_of(c), "file_size_bits");
  c = {};
  c.rate_threshold = std::nan("");
  EXPECT_EQ(field_of(c), "rate_threshold");
  c = {};
  c.cache_ratio = 0.1;  // round(1.5) = 2 per eRRH, 6 < 15
  EXPECT_EQ(field_of(c), "cache_ratio");
  c = {};
  c.errh_positions = {{0, 0}};
  EXPECT_EQ(field_of(c), "errh_positions");
}

TEST(Geometry, HexagonSamplesStayInside) {
  Rng rng(3);
  for (int i = 0; i < 5000; ++i) {
    const Point p = sample_in_hexagon(900.0, rng);
    EXPECT_TRUE(inside_hexagon(p, 900.0));
  }
  // flat-top: corners on the x axis, flat edges at y = +-r sqrt(3)/2
  EXPECT_TRUE(inside_hexagon({899, 0}, 900.0));
  EXPECT_TRUE(inside_hexagon({0, 779}, 900.0));
  EXPECT_FALSE(inside_hexagon({0, 900 * std::sqrt(3.0) / 2 + 1}, 900.0));
}

TEST(Geometry, DefaultLayoutCenterPlusRing) {
  const auto pos = default_errh_positions(3, 900.0);
  ASSERT_EQ(pos.size(), 3u);
  EXPECT_DOUBLE_EQ(pos[0].x, 0.0);
  EXPECT_DOUBLE_EQ(pos[0].y, 0.0);
  for (std::size_t j = 1; j < 3; ++j) EXPECT_TRUE(inside_hexagon(pos[j], 900.0));
}

TEST(GenerateScenario, CachesAndSideInformation) {
  ScenarioConfig c;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Scenario sc = generate_scenario(c, seed);
    const NetworkInstance& in = sc.instance;
    FileSet covered;
    for (FileSet cache : in.caches) {
      EXPECT_EQ(cache.size(), 9u);
      covered |= cache;
    }
    EXPECT_EQ(covered, in.frame());
    for (std::size_t u = 0; u < in.num_users; ++u) {
      // |Has| in [ceil(0.45 F), floor(0.55 F)] = [7, 8]
      EXPECT_GE(sc.side.has[u].size(), 7u);
      EXPECT_LE(sc.side.has[u].size(), 8u);
      EXPECT_EQ(sc.side.has[u] | sc.side.wants[u], in.frame());
      EXPECT_FALSE(sc.side.has[u].intersects(sc.side.wants[u]));
      EXPECT_TRUE(inside_hexagon(in.user_positions[u], c.cell_radius_m));
      EXPECT_FALSE(in.zones[u].contains(u));
      for (std::size_t v : in.zones[u]) {
        EXPECT_TRUE(in.zones[v].contains(u));
        EXPECT_LE(distance(in.user_positions[u], in.user_positions[v]), c.coverage_radius_m);
      }
    }
  }
}

TEST(GenerateScenario, SameSeedSameScenario) {
  ScenarioConfig c;
  const Scenario a = generate_scenario(c, 42), b = generate_scenario(c, 42), d = generate_scenario(c, 43);
  EXPECT_EQ(a.side.has, b.side.has);
  EXPECT_EQ(a.instance.caches, b.instance.caches);
  EXPECT_EQ(a.instance.user_positions[0].x, b.instance.user_positions[0].x);
  EXPECT_NE(a.instance.user_positions[0].x, d.instance.user_positions[0].x);
}

TEST(SideState, ApplyDeliveriesAndDelay) {
  SideState s = SideState::from_has({FileSet{0}, FileSet{0, 1}, FileSet{0, 1, 2}}, 3);
  EXPECT_EQ(s.wants[0], (FileSet{1, 2}));
  EXPECT_EQ(s.wanting(), (UserSet{0, 1}));
  const std::vector<Delivery> d{{0, 1, 2.0}, {1, 2, 5.0}};
  apply_deliveries(s, d, 4.0, UserSet{2});
  EXPECT_EQ(s.has[0], (FileSet{0, 1}));
  EXPECT_TRUE(s.wants[1].empty());
  EXPECT_DOUBLE_EQ(s.delay[2], 0.0);  // wanted nothing, so nothing is charged
  apply_deliveries(s, {}, 3.0, UserSet{0});
  EXPECT_DOUBLE_EQ(s.delay[0], 3.0);
  const std::vector<Delivery> bad{{1, 0, 1.0}};
  EXPECT_THROW(apply_deliveries(s, bad, 1.0, {}), std::logic_error);
}

TEST(SideState, AnticipatedCompletion) {
  SideState s = SideState::from_has({FileSet{}, FileSet{0, 1}}, 2);
  EXPECT_TRUE(std::isinf(anticipated_completion(s, 0, 10.0)));
  EXPECT_DOUBLE_EQ(anticipated_completion(s, 1, 10.0), 0.0);
  const std::vector<Delivery> d1{{0, 0, 2.0}}, d2{{0, 1, 5.0}};
  apply_deliveries(s, d1, 5.0, {});
  apply_deliveries(s, d2, 2.0, {});
  apply_deliveries(s, {}, 1.5, UserSet{0});
  // harmonic mean of (2, 5) is 20/7; 10 * 2 / (20/7) = 7, plus no delay
  EXPECT_NEAR(harmonic_mean_rate(s, 0), 20.0 / 7.0, 1e-12);
  EXPECT_NEAR(anticipated_completion(s, 0, 10.0), 7.0, 1e-12);
}

TEST(FixedScenario, ExampleLoads) {
  const Scenario sc = fixtures::example1();
  EXPECT_EQ(sc.instance.num_errhs, 2u);
  EXPECT_EQ(sc.instance.num_users, 6u);
  EXPECT_DOUBLE_EQ(sc.instance.rate_threshold_bps, 1.0);
  EXPECT_EQ(sc.side.wants[1], (FileSet{1, 2}));
  EXPECT_EQ(sc.instance.zones[0], (UserSet{3, 4}));
  EXPECT_DOUBLE_EQ(sc.instance.fixed->errh(1, 1), 5.0);
}

TEST(FixedScenario, RejectsUncoveredFrame) {
  Json j = load_json_file(std::string(FOGRAN_SCENARIO_DIR) + "/example1.json");
  j["fixed"]["caches"] = Json::array({Json::array({0}), Json::array({1})});
  EXPECT_THROW(fixed_scenario_from_json(j), ConfigError);
  j = load_json_file(std::string(FOGRAN_SCENARIO_DIR) + "/example1.json");
  j["fixed"]["bogus"] = 1;
  try {
    fixed_scenario_from_json(j);
    FAIL() << "unknown key accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ipme/config.hpp"

using namespace ipme;
using json = nlohmann::json;

TEST(Config, DefaultsInterpret) {
  const RunConfig cfg = interpret_config(default_config());
  EXPECT_EQ(cfg.params.m(), 2.0);
  EXPECT_EQ(cfg.grid.dim(), 1);
  EXPECT_EQ(cfg.grid.n(0), 65);
  EXPECT_EQ(cfg.problem, ProblemKind::Dirichlet);
  EXPECT_EQ(cfg.quantity, Quantity::U);
}

TEST(Config, MergeKeepsDefaultsAndRejectsUnknownKeys) {
  const json merged = merge_config(json::parse(R"({"params": {"m": 3}, "t_end": 2})"));
  EXPECT_EQ(merged["params"]["m"], 3);
  EXPECT_EQ(merged["params"]["delta"], 0.001);
  EXPECT_EQ(merged["t_end"], 2);
  EXPECT_THROW(merge_config(json::parse(R"({"bogus": 1})")), ConfigError);
  EXPECT_THROW(merge_config(json::parse(R"({"params": {"mm": 1}})")), ConfigError);
  EXPECT_THROW(merge_config(json::parse("[1, 2]")), ConfigError);
}

TEST(Config, Overrides) {
  json doc = default_config();
  apply_override(doc, "params.m=1.5");
  apply_override(doc, "output_dir=some/where");
  apply_override(doc, "solver.gradient=upwind");
  EXPECT_EQ(doc["params"]["m"], 1.5);
  EXPECT_EQ(doc["output_dir"], "some/where");
  EXPECT_EQ(interpret_config(doc).solver.gradient, GradientScheme::Upwind);
  EXPECT_THROW(apply_override(doc, "params.q=1"), ConfigError);
  EXPECT_THROW(apply_override(doc, "params=1"), ConfigError);
  EXPECT_THROW(apply_override(doc, "params.m=abc"), ConfigError);
  EXPECT_THROW(apply_override(doc, "no_equals"), ConfigError);
}

TEST(Config, InvalidValuesRaise) {
  auto with = [](const std::string& o) { return merge_config(json::object(), {o}); };
  EXPECT_THROW(interpret_config(with("params.m=0.5")), ParameterError);
  EXPECT_THROW(interpret_config(with("problem=wave")), ConfigError);
  EXPECT_THROW(interpret_config(with("quantity=v")), ConfigError);
  EXPECT_THROW(interpret_config(with("solver.safety=2")), ConfigError);
  EXPECT_THROW(interpret_config(with("domain.shape=star")), ConfigError);
  json g = default_config();
  g["grid"]["n"] = json::array({2});
  EXPECT_THROW(interpret_config(g), ParameterError);
  g["grid"]["n"] = json::array({5, 5});
  EXPECT_THROW(interpret_config(g), ConfigError);
}

TEST(Config, GridFromJson) {
  const GridSpec g = grid_from_json(json::parse(R"({"dim": 2, "n": [5, 9], "lo": [-1, 0], "hi": [1, 2]})"));
  EXPECT_EQ(g.size(), 45);
  EXPECT_DOUBLE_EQ(g.h(0), 0.5);
  EXPECT_DOUBLE_EQ(g.h(1), 0.25);
  EXPECT_DOUBLE_EQ(g.origin(0), -1.0);
}

TEST(DataSpec, Kinds) {
  const Params p(2.0);
  Point x(2);
  x << 0.1, 0.0;
  EXPECT_EQ(make_data(json::parse(R"({"type": "constant", "value": 0.3})"), p).f(x, 0.0), 0.3);
  EXPECT_NEAR(make_data(json::parse(R"({"type": "bump", "amplitude": 2, "radius": 0.2})"), p).f(x, 0.0), 1.5, 1e-15);
  const auto lin = make_data(json::parse(R"({"type": "linear", "slope": [2, 0], "offset": 1})"), p);
  EXPECT_TRUE(lin.time_dependent);
  EXPECT_NEAR(lin.f(x, 0.5), 0.2 + 1.0 + 2.0, 1e-15);
  const auto two =
      make_data(json::parse(R"({"type": "two-bump", "amplitude": 1, "radius": 0.1, "centers": [[-0.5, 0], [0.1, 0]]})"), p);
  EXPECT_EQ(two.f(x, 0.0), 1.0);
  const auto ex = make_data(json::parse(R"({"type": "exact", "kind": "barenblatt-u"})"), p);
  EXPECT_NEAR(ex.f(Point::Zero(2), 1.0), 1.0 / 6.0, 1e-15);
  EXPECT_THROW(make_data(json::parse(R"({"type": "constant", "value": -1})"), p), ConfigError);
  EXPECT_THROW(make_data(json::parse(R"({"type": "spiral"})"), p), ConfigError);
  EXPECT_THROW(make_data(json::parse(R"({"value": 1})"), p), ConfigError);
  EXPECT_THROW(make_data(json::parse(R"({"type": "bump", "amplitude": 1, "radius": 0})"), p), ConfigError);
}

TEST(ExactSpec, FromJson) {
  const auto s = exact_spec_from_json(json::parse(R"({"kind": "separable-ball", "a_const": 0.5, "t0": -1})"), Params(3.0));
  EXPECT_EQ(s.kind, ExactKind::SeparableBall);
  EXPECT_EQ(s.params.m(), 3.0);
  EXPECT_EQ(s.a_const, 0.5);
  EXPECT_EQ(s.t0, -1.0);
  EXPECT_THROW(exact_spec_from_json(json::parse(R"({"R": 1})"), Params(2.0)), ConfigError);
  EXPECT_THROW(exact_spec_from_json(json::parse(R"({"kind": "barenblatt-u", "Q": 1})"), Params(2.0)), ConfigError);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "ipme_cfg_test.json";
  {
    std::ofstream os(path);
    os << R"({"params": {"m": 3}})";
  }
  EXPECT_EQ(load_config(path, {"t_end=4"})["t_end"], 4);
  {
    std::ofstream os(path);
    os << "{ not json";
  }
  EXPECT_THROW(load_config(path), ParseError);
  EXPECT_THROW(load_config(path.string() + ".missing"), IoError);
}

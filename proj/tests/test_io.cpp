#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "ipme/io.hpp"

using namespace ipme;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ipme_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

}  // namespace

TEST(Snapshot, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1e3, 1e3);
  for (int d = 1; d <= 3; ++d) {
    const GridSpec g = GridSpec::cube(d, 5, -0.3, 1.7);
    Array v(g.size());
    for (Index i = 0; i < g.size(); ++i) v[i] = U(rng) * std::pow(10.0, static_cast<int>(i % 30) - 15);
    const ScalarField f(g, v, 0.1 + d / 3.0);
    const Snapshot s = parse_snapshot(format_snapshot(f, Quantity::Rho));
    EXPECT_EQ(s.quantity, Quantity::Rho);
    EXPECT_EQ(s.field.t(), f.t());
    EXPECT_EQ(s.field.grid().dim(), d);
    for (int a = 0; a < d; ++a) {
      EXPECT_EQ(s.field.grid().h(a), g.h(a));
      EXPECT_EQ(s.field.grid().origin(a), g.origin(a));
    }
    EXPECT_TRUE((s.field.values() == f.values()).all());
  }
}

TEST(Snapshot, SubnormalsSurviveAndOverflowIsRejected) {
  Array v(3);
  v << 8.8240124347246633e-321, std::numeric_limits<double>::denorm_min(), -1e-310;
  const ScalarField f(GridSpec::line(3, 0.0, 1.0), v, 1.0);
  EXPECT_TRUE((parse_snapshot(format_snapshot(f, Quantity::Rho)).field.values() == v).all());
  EXPECT_THROW(parse_snapshot("# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n1\n1e999\n3\n"), ParseError);
}

TEST(Snapshot, HeaderLayout) {
  const ScalarField f(GridSpec::line(3, 0.0, 1.0), Array::Constant(3, 0.5), 2.0);
  const std::string text = format_snapshot(f, Quantity::U);
  EXPECT_EQ(text, "# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n0.5\n0.5\n0.5\n");
}

TEST(Snapshot, MalformedInputReportsLine) {
  const std::string good = "# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n1\n2\n3\n";
  EXPECT_NO_THROW(parse_snapshot(good));
  auto expect_line = [](const std::string& text, const std::string& where) {
    try {
      parse_snapshot(text);
      FAIL() << "accepted: " << text;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos) << e.what();
    }
  };
  expect_line("# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=w\n1\n2\n3\n", "line 1");
  expect_line("# ipme v2 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n1\n2\n3\n", "line 1");
  expect_line("# ipme v1 d=2 n=3 h=0.5 origin=0 t=2 quantity=u\n1\n2\n3\n", "line 1");
  expect_line("# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n1\nx\n3\n", "line 3");
  expect_line("# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n1\n2\n", "line 4");
  expect_line("# ipme v1 d=1 n=3 h=0.5 origin=0 t=2 quantity=u\n1\n2\n3\n4\n", "line 5");
  expect_line("", "line 1");
}

TEST(Snapshot, DirectoryIsSortedByTime) {
  const fs::path dir = scratch("dir");
  const GridSpec g = GridSpec::line(3, 0.0, 1.0);
  write_snapshot(ScalarField(g, 3.0), Quantity::U, dir / "a.snap");
  write_snapshot(ScalarField(g, 1.0), Quantity::U, dir / "b.snap");
  write_snapshot(ScalarField(g, 2.0), Quantity::U, dir / "c.snap");
  write_text(dir / "notes.txt", "ignored");
  const auto s = read_snapshot_dir(dir);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].field.t(), 1.0);
  EXPECT_EQ(s[2].field.t(), 3.0);
  EXPECT_THROW(read_snapshot_dir(dir / "missing"), IoError);
  EXPECT_THROW(read_snapshot(dir / "missing.snap"), IoError);
}

TEST(Csv, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
  const fs::path dir = scratch("csv");
  write_csv(dir / "x.csv", {"t", "note"}, {{"1", "a,b"}});
  EXPECT_EQ(slurp(dir / "x.csv"), "t,note\r\n1,\"a,b\"\r\n");
}

TEST(Manifest, RewriteIsIdenticalAndOmitsWallTime) {
  RunManifest m;
  m.params = Params(2.0, 0.0, 1e-3, 1e-3);
  m.grid = GridSpec::cube(2, 5, 0.0, 1.0);
  m.metrics["x"] = 0.1;
  m.wall_seconds = {12.5};
  const fs::path dir = scratch("manifest");
  write_manifest(m, dir / "a.json");
  m.wall_seconds = {99.0};
  write_manifest(m, dir / "b.json");
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  write_timing(m, dir / "timing.json");
  EXPECT_NE(slurp(dir / "timing.json").find("99"), std::string::npos);
}

TEST(Quantity, TagsRoundTrip) {
  for (Quantity q : {Quantity::U, Quantity::Rho, Quantity::V, Quantity::G})
    EXPECT_EQ(quantity_from_string(to_string(q)), q);
  EXPECT_THROW(quantity_from_string("p"), ParseError);
}

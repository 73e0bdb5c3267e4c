#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <functional>

#include "nchardy/io.hpp"
#include "test_util.hpp"

using namespace nchardy;
using namespace nchardy::testing;

namespace {

std::string path_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.path;
  }
  return "<no error>";
}

Json good_series() {
  return Json::parse(R"({"d": 2, "rows": 1, "cols": 1, "max_degree": 3,
    "coeffs": [{"word": [2, 1], "matrix": [[[1.0, 0.5]]]}, {"word": [], "matrix": [[[2.0, 0.0]]]}]})");
}

}  // namespace

TEST(Io, ComplexAndMatrixRoundTrip) {
  std::mt19937_64 rng(61);
  CMatrix m = random_matrix(2, 3, rng);
  Json j = Json::parse(matrix_to_json(m).dump());
  EXPECT_EQ(matrix_from_json(j, "$"), m);
  CVector v = random_vector(4, rng);
  EXPECT_EQ(vector_from_json(Json::parse(vector_to_json(v).dump()), "$"), v);
  EXPECT_EQ(complex_from_json(Json::parse("[1.5, -2]"), "$"), Complex(1.5, -2));
  // A bare real number is not a complex entry.
  EXPECT_EQ(path_of([] { complex_from_json(Json::parse("1.5"), "$.x"); }), "$.x");
}

TEST(Io, SeriesRoundTripIsExactAndSorted) {
  std::mt19937_64 rng(62);
  Series f = random_series(3, 2, 1, 3, 5, 1.0, rng);
  OrderedJson out = series_to_json(f);
  Series back = series_from_json(Json::parse(out.dump()));
  EXPECT_EQ(max_coeff_diff(back, f, 5), 0.0);
  EXPECT_EQ(back.maxDegree(), 5);
  Series g = series_from_json(good_series());
  OrderedJson sorted = series_to_json(g);
  ASSERT_EQ(sorted["coeffs"].size(), 2u);
  EXPECT_TRUE(sorted["coeffs"][0]["word"].empty());
  EXPECT_EQ(sorted["coeffs"][1]["word"], OrderedJson({2, 1}));
  EXPECT_EQ(sorted.dump(), series_to_json(series_from_json(Json::parse(sorted.dump()))).dump());
}

TEST(Io, SeriesValidationPaths) {
  auto mutate = [](const std::function<void(Json&)>& edit) {
    Json j = good_series();
    edit(j);
    return path_of([&] { series_from_json(j); });
  };
  EXPECT_EQ(mutate([](Json& j) { j["extra"] = 1; }), "$.extra");
  EXPECT_EQ(mutate([](Json& j) { j.erase("rows"); }), "$.rows");
  EXPECT_EQ(mutate([](Json& j) { j["d"] = 0; }), "$.d");
  EXPECT_EQ(mutate([](Json& j) { j["d"] = 1.5; }), "$.d");
  EXPECT_EQ(mutate([](Json& j) { j["coeffs"][0]["word"] = {3}; }), "$.coeffs[0].word[0]");
  EXPECT_EQ(mutate([](Json& j) { j["coeffs"][0]["word"] = {1, 1, 1, 1}; }), "$.coeffs[0].word");
  EXPECT_EQ(mutate([](Json& j) { j["coeffs"][1]["word"] = {2, 1}; }), "$.coeffs[1].word");
  EXPECT_EQ(mutate([](Json& j) { j["coeffs"][0]["matrix"][0][0] = {1.0}; }), "$.coeffs[0].matrix[0][0]");
  EXPECT_EQ(mutate([](Json& j) { j["coeffs"][0]["matrix"] = Json::parse("[[[1,0],[2,0]]]"); }),
            "$.coeffs[0].matrix");
  EXPECT_EQ(mutate([](Json& j) { j["coeffs"][0]["matrix"] = Json::parse("[[[1,0]],[[1,0],[2,0]]]"); }),
            "$.coeffs[0].matrix[1]");
  EXPECT_EQ(path_of([] { series_from_json(Json::parse("[]")); }), "$");
}

TEST(Io, PointAndPairs) {
  std::mt19937_64 rng(63);
  NcPoint z = random_point(2, 3, 0.5, rng);
  NcPoint back = point_from_json(Json::parse(point_to_json(z).dump()));
  EXPECT_EQ(back.n, 3);
  EXPECT_EQ(back.Z[1], z.Z[1]);
  EXPECT_NEAR(back.rowNorm, z.rowNorm, 1e-15);
  SingularityPair p{z, random_vector(3, rng)};
  Json one = Json::parse(pair_to_json(p).dump());
  EXPECT_EQ(pairs_from_json(one).size(), 1u);
  Json many = Json::array({one, one});
  EXPECT_EQ(pairs_from_json(many).size(), 2u);
  many[1]["y"] = Json::parse("[[1,0]]");
  EXPECT_EQ(path_of([&] { pairs_from_json(many); }), "$[1].y");
  Json badPoint = Json::parse(point_to_json(z).dump());
  badPoint["n"] = 2;
  EXPECT_EQ(path_of([&] { point_from_json(badPoint); }), "$.Z[0]");
}

TEST(Io, MalformedFileReportsOffset) {
  const std::string file = std::string(NCHARDY_FIXTURES) + "/truncated.json";
  try {
    read_json_file(file);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.path, "$");
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
  }
  EXPECT_THROW(read_json_file(std::string(NCHARDY_FIXTURES) + "/does_not_exist.json"), Error);
}

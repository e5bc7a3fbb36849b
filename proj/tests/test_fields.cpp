#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "bodyforce/experiment.hpp"
#include "bodyforce/field_io.hpp"
#include "bodyforce/fields.hpp"

using namespace bodyforce;
constexpr double pi = std::numbers::pi;

namespace {

ScalarField2D sample(std::size_t n, double (*f)(double, double)) {
  return ScalarField2D::analytic(f).sampled_on(GridSpec(n));
}

double cos24(double x, double y) { return std::cos(2 * pi * x) * std::cos(4 * pi * y); }

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(ElasticConstants, Validation) {
  EXPECT_NO_THROW((ElasticConstants{-1.0 / 8, 1.0 / 12, 1.0}.validate()));
  EXPECT_THROW((ElasticConstants{0.0, 0.0, 1.0}.validate()), InvalidInput);
  EXPECT_THROW((ElasticConstants{-1.0, 0.4, 1.0}.validate()), InvalidInput);
  EXPECT_THROW((ElasticConstants{0.0, 1.0, 0.0}.validate()), InvalidInput);
}

TEST(GridSpec, RejectsEvenOrTinyCounts) {
  EXPECT_THROW(GridSpec(100), InvalidInput);
  EXPECT_THROW(GridSpec(1), InvalidInput);
  EXPECT_THROW(GridSpec(5, 4), InvalidInput);
  const GridSpec g(5, 3);
  EXPECT_DOUBLE_EQ(g.hx(), 0.25);
  EXPECT_DOUBLE_EQ(g.hy(), 0.5);
  EXPECT_EQ(g.index(1, 2), 7u);
}

TEST(BoundaryTrace, EdgeNormals) {
  EXPECT_EQ(outward_normal(Edge::Bottom), (std::array<double, 2>{0, -1}));
  EXPECT_EQ(outward_normal(Edge::Right), (std::array<double, 2>{1, 0}));
  EXPECT_EQ(outward_normal(Edge::Top), (std::array<double, 2>{0, 1}));
  EXPECT_EQ(outward_normal(Edge::Left), (std::array<double, 2>{-1, 0}));
  EXPECT_EQ(edge_point(Edge::Right, 0.25), (std::array<double, 2>{1.0, 0.25}));
}

TEST(L2Norm, ConstantOne) {
  EXPECT_DOUBLE_EQ(l2_norm(sample(101, [](double, double) { return 1.0; })), 1.0);
}

TEST(L2Norm, Zero) { EXPECT_EQ(l2_norm(sample(101, [](double, double) { return 0.0; })), 0.0); }

TEST(L2Norm, CosineProduct) { EXPECT_NEAR(l2_norm(sample(201, cos24)), 0.5, 1e-8); }

TEST(L2Norm, RejectsAnalytic) { EXPECT_THROW(l2_norm(ScalarField2D::analytic(cos24)), InvalidInput); }

TEST(L2Norm, Homogeneous) {
  const auto w = sample(51, [](double x, double y) { return std::exp(x) * std::sin(3 * y) + 0.2; });
  const double base = l2_norm(w);
  for (double a : {-3.5, 0.0, 1e-3, 7.0}) {
    std::vector<double> v(w.values().begin(), w.values().end());
    for (auto& x : v) x *= a;
    EXPECT_NEAR(l2_norm(ScalarField2D::sampled(w.grid(), v)), std::abs(a) * base, 1e-14 * std::max(1.0, std::abs(a)));
  }
}

TEST(L2Norm, FourthOrderConvergence) {
  // ‖cos(1.3x₁)cos(0.7x₂)‖² = Π (1/2 + sin(2a)/(4a))
  auto exact_sq = [] {
    auto f = [](double a) { return 0.5 + std::sin(2 * a) / (4 * a); };
    return f(1.3) * f(0.7);
  }();
  auto err = [&](std::size_t n) {
    const double v = l2_norm(sample(n, [](double x, double y) { return std::cos(1.3 * x) * std::cos(0.7 * y); }));
    return std::abs(v * v - exact_sq);
  };
  const double e1 = err(11), e2 = err(21);
  EXPECT_GT(e1 / e2, 12.0);
}

TEST(H1Norm, Constant) { EXPECT_NEAR(h1_norm(sample(21, [](double, double) { return -2.5; })), 2.5, 1e-14); }

TEST(H1Norm, Linear) {
  EXPECT_NEAR(h1_norm(sample(201, [](double x, double) { return x; })), std::sqrt(1.0 / 3 + 1), 2e-3);
}

TEST(H1Norm, CosineProduct) {
  EXPECT_NEAR(h1_norm(sample(401, cos24)), std::sqrt(0.25 + 5 * pi * pi), 1e-2);
}

TEST(LinfNorm, MaxAbs) {
  const auto w = ScalarField2D::sampled(GridSpec(3), {0, 1, -4, 2, 0, 0, 0, 3, 1});
  EXPECT_EQ(linf_norm(w), 4.0);
}

TEST(FieldIO, ZeroRoundTrip) {
  const auto w = ScalarField2D::sampled(GridSpec(3), std::vector<double>(9, 0.0));
  std::stringstream ss;
  write_field(ss, w);
  const auto r = read_field(ss);
  ASSERT_EQ(r.grid(), w.grid());
  for (std::size_t i = 0; i < 9; ++i) EXPECT_TRUE(bit_equal(r.values()[i], w.values()[i]));
}

TEST(FieldIO, HeaderFormat) {
  std::stringstream ss;
  write_field(ss, ScalarField2D::sampled(GridSpec(3, 5), std::vector<double>(15, 0.5)));
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "# scalar-field nx=3 ny=5");
}

TEST(FieldIO, NaNCellNamesLine) {
  std::stringstream ss("# scalar-field nx=3 ny=3\n0,0,0\n0,nan,0\n0,0,0\n");
  try {
    read_field(ss, "f.csv");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("f.csv:3"), std::string::npos);
  }
}

TEST(FieldIO, RejectsRaggedAndMalformed) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::stringstream ss(text);
    try {
      read_field(ss);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("# scalar-field nx=3 ny=3\n0,0,0\n0,0\n0,0,0\n"), 3u);
  EXPECT_EQ(line_of("# scalar-fld nx=3 ny=3\n"), 1u);
  EXPECT_EQ(line_of("# scalar-field nx=3\n"), 1u);
  EXPECT_EQ(line_of("# scalar-field nx=4 ny=3\n"), 1u);
  EXPECT_EQ(line_of("# scalar-field nx=3 ny=3\n0,0,0\n0,0,0\n"), 3u);
  EXPECT_EQ(line_of("# scalar-field nx=3 ny=3\n0,0,0\n0,inf,0\n0,0,0\n"), 3u);
  EXPECT_EQ(line_of("# scalar-field nx=3 ny=3\n0,0,0\n0,0,0\n0,0,0\n1\n"), 5u);
}

TEST(FieldIO, ExactSourceRoundTripsBitExactly) {
  const auto f = experiment::exact_source(GridSpec(101)).component(1);
  const auto path = std::filesystem::temp_directory_path() / "bodyforce_f1ex.csv";
  write_field(path, f);
  const auto r = read_field(path);
  std::filesystem::remove(path);
  for (std::size_t i = 0; i < f.values().size(); ++i) ASSERT_TRUE(bit_equal(r.values()[i], f.values()[i])) << i;
}

TEST(FieldIO, RandomFieldsRoundTripBitExactly) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> ex(-300, 300);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> v(7 * 9);
    for (auto& x : v) x = std::ldexp(mant(rng), ex(rng));
    v[0] = std::numeric_limits<double>::denorm_min();
    v[1] = -0.0;
    v[2] = std::numeric_limits<double>::max();
    const auto w = ScalarField2D::sampled(GridSpec(7, 9), v);
    std::stringstream ss;
    write_field(ss, w);
    const auto r = read_field(ss);
    for (std::size_t i = 0; i < v.size(); ++i) ASSERT_TRUE(bit_equal(r.values()[i], v[i])) << i;
  }
}

TEST(TimeSignalIO, RoundTrip) {
  const auto s = TimeSignal::analytic(experiment::phi, 1.0).resampled(11);
  std::stringstream ss;
  write_time_signal(ss, s);
  const auto r = read_time_signal(ss);
  EXPECT_EQ(r.T(), 1.0);
  for (std::size_t k = 0; k < 11; ++k) EXPECT_TRUE(bit_equal(r.samples()[k], s.samples()[k]));
}

TEST(BoundaryIO, RoundTripAllEdges) {
  const auto X = sample_boundary(experiment::exact_data().X, 9, 5);
  const auto dir = std::filesystem::temp_directory_path() / "bodyforce_boundary_io";
  std::filesystem::create_directories(dir);
  write_boundary_component(dir / "X1.csv", X, 1);
  write_boundary_component(dir / "X2.csv", X, 2);
  const auto r = read_boundary(dir / "X1.csv", dir / "X2.csv", 1.0);
  std::filesystem::remove_all(dir);
  for (Edge e : kEdges)
    for (int c = 1; c <= 2; ++c) {
      const auto a = X.component(e, c).values(), b = r.component(e, c).values();
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t i = 0; i < a.size(); ++i) ASSERT_TRUE(bit_equal(a[i], b[i]));
    }
}

TEST(BoundaryIO, MissingEdgeIsRejected) {
  std::stringstream ss("# boundary-trace edge=bottom component=1 ns=3 nt=3\n0,0,0\n0,0,0\n0,0,0\n");
  EXPECT_THROW(read_boundary_component(ss, 1, 1.0), ParseError);
}

TEST(ProblemData, RejectsHorizonMismatch) {
  const auto k = experiment::constants();
  EXPECT_THROW(ProblemData(k, TimeSignal::analytic(experiment::phi, 2.0), BoundaryTrace::zero(1.0),
                           VectorField2D::zero(), VectorField2D::zero(), VectorField2D::zero()),
               InvalidInput);
}

TEST(VectorField, RejectsMixedGrids) {
  EXPECT_THROW(VectorField2D(sample(5, cos24), sample(7, cos24)), InvalidInput);
  EXPECT_THROW(VectorField2D(sample(5, cos24), ScalarField2D::analytic(cos24)), InvalidInput);
}

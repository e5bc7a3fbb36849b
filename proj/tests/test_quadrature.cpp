#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "bodyforce/experiment.hpp"
#include "bodyforce/quadrature.hpp"
#include "bodyforce/simpson.hpp"

using namespace bodyforce;
constexpr double pi = std::numbers::pi;

namespace {

std::vector<double> samples(std::size_t n, double (*f)(double)) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

const TimeSignal& phi() {
  static const TimeSignal s = TimeSignal::analytic(experiment::phi, 1.0);
  return s;
}

}  // namespace

TEST(Simpson, ExactOnQuadratic) {
  EXPECT_NEAR(simpson_1d(samples(101, [](double t) { return t * t; }), 0.01), 1.0 / 3.0, 1e-12);
}

TEST(Simpson, Zero) { EXPECT_EQ(simpson_1d(std::vector<double>(11, 0.0), 0.1), 0.0); }

TEST(Simpson, Sine) {
  EXPECT_NEAR(simpson_1d(samples(1001, [](double t) { return std::sin(pi * t); }), 1e-3), 2.0 / pi, 1e-10);
}

TEST(Simpson, RejectsEvenCount) {
  EXPECT_THROW(simpson_1d(std::vector<double>(10, 1.0), 0.1), InvalidInput);
  EXPECT_THROW(simpson_1d(std::vector<double>(1, 1.0), 0.1), InvalidInput);
}

TEST(SineMoment, ZeroFrequency) { EXPECT_EQ(sine_moment(phi(), 0.0, 1.0), 0.0); }

TEST(SineMoment, ResonantFrequency) { EXPECT_NEAR(sine_moment(phi(), pi, 1.0), pi * pi / 6.0, 1e-9); }

TEST(SineMoment, ClosedFormFactor) {
  const double r = 2 * pi, w = r / (2 * std::sqrt(6.0));
  EXPECT_NEAR(sine_moment(phi(), w, 1.0) * (24 * pi * pi - r * r), 8 * pi * pi * pi * std::sin(w), 1e-7);
}

TEST(SineMoment, Linear) {
  const auto a = TimeSignal::analytic([](double t) { return std::cos(3 * t) + t; }, 1.0);
  const auto b = TimeSignal::analytic([](double t) { return std::exp(-t); }, 1.0);
  const auto ab = TimeSignal::analytic([](double t) { return 2.5 * (std::cos(3 * t) + t) - 1.5 * std::exp(-t); }, 1.0);
  for (double w : {0.3, 2.0, 11.0})
    EXPECT_NEAR(sine_moment(ab, w, 1.0), 2.5 * sine_moment(a, w, 1.0) - 1.5 * sine_moment(b, w, 1.0), 1e-14);
}

TEST(SineMoment, RejectsHorizonMismatch) { EXPECT_THROW(sine_moment(phi(), 1.0, 2.0), InvalidInput); }

TEST(DomainMoment, AreaAtZeroFrequency) {
  const auto one = ScalarField2D::analytic([](double, double) { return 1.0; });
  EXPECT_NEAR(domain_cosine_moment(one, {0, 0}).value, 1.0, 1e-15);
}

TEST(DomainMoment, FullPeriod) {
  const auto one = ScalarField2D::analytic([](double, double) { return 1.0; });
  EXPECT_NEAR(domain_cosine_moment(one, {2 * pi, 0}).value, 0.0, 1e-12);
}

TEST(DomainMoment, CosineProduct) {
  const auto w = experiment::exact_poly(1).as_field();
  EXPECT_NEAR(domain_cosine_moment(w, {2 * pi, 4 * pi}).value, 0.25, 1e-9);
}

TEST(DomainMoment, EvenInAlphaExactly) {
  const auto w = experiment::exact_data().u0star.component(1).sampled_on(GridSpec(101));
  for (Frequency2D a : {Frequency2D{1.5, -3.25}, Frequency2D{17.0, 4.0}, Frequency2D{-0.1, 0.2}})
    EXPECT_EQ(domain_cosine_moment(w, a).value, domain_cosine_moment(w, -a).value);
}

TEST(DomainMoment, AliasingFlag) {
  const auto w = ScalarField2D::analytic([](double x, double) { return x; }).sampled_on(GridSpec(21));
  // 21 nodes: h = 0.05, four nodes per period up to |α| = 10π.
  EXPECT_FALSE(domain_cosine_moment(w, {10 * pi, 0}).aliased);
  EXPECT_TRUE(domain_cosine_moment(w, {0, 10.5 * pi}).aliased);
  EXPECT_FALSE(domain_cosine_moment(ScalarField2D::analytic([](double x, double) { return x; }), {100, 0}).aliased);
}

TEST(DomainMoment, SelfConvergence) {
  const auto w = experiment::exact_data().u0star.component(2);
  for (Frequency2D a : {Frequency2D{3, 5}, Frequency2D{-20, 31}}) {
    const double lo = domain_cosine_moment(w, a, 401).value, hi = domain_cosine_moment(w, a, 801).value;
    EXPECT_NEAR(lo, hi, 1e-7);
  }
}

TEST(BoundaryMoment, ZeroTrace) {
  EXPECT_EQ(boundary_spacetime_moment(BoundaryTrace::zero(1.0), 1.0, TractionKernel::alpha_dot(), {1, 2}, 1.0), 0.0);
}

TEST(BoundaryMoment, ZeroFrequency) {
  const auto X = experiment::exact_data().X;
  EXPECT_EQ(boundary_spacetime_moment(X, 0.0, TractionKernel::alpha_dot(), {1, 2}, 1.0), 0.0);
}

TEST(BoundaryMoment, RejectsHorizonMismatch) {
  const auto X = experiment::exact_data().X;
  EXPECT_THROW(boundary_spacetime_moment(X, 1.0, TractionKernel::alpha_dot(), {1, 2}, 2.0), InvalidInput);
}

TEST(BoundaryMoment, MatchesTenfoldReference) {
  const auto X = experiment::exact_data().X;
  const Frequency2D a{2 * pi, 4 * pi};
  const double w = a.norm() / (2 * std::sqrt(6.0));
  const double base = boundary_spacetime_moment(X, w, TractionKernel::alpha_dot(), a, 1.0, {401, 201});
  const double ref = boundary_spacetime_moment(X, w, TractionKernel::alpha_dot(), a, 1.0, {4001, 2001});
  EXPECT_NEAR(base, ref, 1e-7);
}

TEST(BoundaryMoment, KernelsAreLinearCombinations) {
  // |α|²X_j − α_j(α·X) contracted with α_j vanishes identically.
  const auto X = experiment::perturbed_data(2).X;
  const Frequency2D a{3.5, -1.25};
  const QuadratureOptions o{201, 101};
  const double t1 = boundary_spacetime_moment(X, 0.7, TractionKernel::transverse(1), a, 1.0, o);
  const double t2 = boundary_spacetime_moment(X, 0.7, TractionKernel::transverse(2), a, 1.0, o);
  EXPECT_NEAR(a.alpha1 * t1 + a.alpha2 * t2, 0.0, 1e-12 * (std::abs(t1) + std::abs(t2)) * a.norm2());
}

TEST(DiskQuadrature, Area) {
  auto one = [](const Frequency2D&) { return 1.0; };
  EXPECT_NEAR(disk_quadrature(one, 2.0), 4 * pi, 0.01 * 4 * pi);
  EXPECT_NEAR(disk_quadrature(one, 2.0, 2.0 / 400), 4 * pi, 0.001 * 4 * pi);
}

TEST(DiskQuadrature, OddIntegrandVanishes) {
  auto odd = [](const Frequency2D& a) { return std::sin(a.alpha1) * std::exp(a.alpha2) + a.alpha1 * a.alpha2 * a.alpha2; };
  EXPECT_NEAR(disk_quadrature(odd, 5.0), 0.0, 1e-11);
}

TEST(DiskQuadrature, Gaussian) {
  auto g = [](const Frequency2D& a) { return std::exp(-a.norm2()); };
  EXPECT_NEAR(disk_quadrature(g, 6.0), pi, 1e-4);
}

TEST(DiskQuadrature, NonFiniteNamesNode) {
  auto bad = [](const Frequency2D& a) { return a.alpha1 > 0.9 ? std::numeric_limits<double>::quiet_NaN() : 0.0; };
  EXPECT_THROW(disk_quadrature(bad, 2.0), NumericError);
}

TEST(FrequencyLattice, SymmetricAndOffset) {
  const auto L = FrequencyLattice::make(39.5);
  ASSERT_EQ(L.size() % 2, 0u);
  for (std::size_t k = 0; k < L.size(); ++k) {
    EXPECT_NE(L.axis[k], 0.0);
    EXPECT_EQ(L.axis[k], -L.axis[L.size() - 1 - k]);
  }
  EXPECT_DOUBLE_EQ(L.spacing, 39.5 / 200);
  EXPECT_DOUBLE_EQ(FrequencyLattice::default_spacing(80), 0.25);
}

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include "bodyforce/experiment.hpp"
#include "bodyforce/spectral.hpp"

using namespace bodyforce;
using namespace bodyforce::experiment;
constexpr double pi = std::numbers::pi;

namespace {

ProblemData zero_data() {
  return ProblemData(constants(), TimeSignal::analytic(phi, 1.0), BoundaryTrace::zero(1.0), VectorField2D::zero(),
                     VectorField2D::zero(), VectorField2D::zero());
}

// The data of I_n minus the exact data, as its own tuple.
ProblemData perturbation_only(int n) {
  const double k = 2.0 * n * pi, amp = pi / (12.0 * std::sqrt(double(n)));
  const double u_amp = pi / (n * std::sqrt(double(n)));
  auto X = BoundaryTrace::from_traction(
      [=](double x1, double x2, double t, const std::array<double, 2>& nv) -> std::array<double, 2> {
        const double st = std::sin(pi * t);
        return {amp * st * (std::sin(k * x2) * nv[0] + 2 * std::sin(k * x1) * nv[1]),
                amp * st * (std::sin(k * x1) * nv[1] + 2 * std::sin(k * x2) * nv[0])};
      },
      1.0);
  auto u = ScalarField2D::analytic([=](double x1, double x2) { return u_amp * std::sin(k * x1) * std::sin(k * x2); });
  return ProblemData(constants(), TimeSignal::analytic(phi, 1.0), X, VectorField2D::zero(), VectorField2D(u, u),
                     VectorField2D::zero());
}

const QuadratureSource& exact_quad() {
  static const QuadratureSource s(exact_data());
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST(Dispersion, ZeroFrequency) {
  const auto d = eval_dispersion(exact_data(), {0, 0});
  EXPECT_EQ(d.d1, 0.0);
  EXPECT_EQ(d.d2, 0.0);
  EXPECT_EQ(d.d, 0.0);
}

TEST(Dispersion, PaperClosedForm) {
  const Frequency2D a{2 * pi, 2 * pi};
  const double r2 = a.norm2();
  const auto d = eval_dispersion(exact_data(), a);
  const double expect = 32 * std::pow(pi, 6) * std::sin(pi / std::sqrt(3.0)) * std::sin(pi * std::sqrt(2.0 / 3.0));
  EXPECT_LT(rel(d.d * (r2 - 24 * pi * pi) * (r2 - 12 * pi * pi), expect), 1e-6);
  EXPECT_EQ(d.d, d.d1 * d.d2);
}

TEST(Dispersion, RemovableSingularity) {
  const double r = 2 * std::sqrt(6.0) * pi;
  const Frequency2D a{r / std::sqrt(2.0), r / std::sqrt(2.0)};
  EXPECT_NEAR(eval_dispersion(exact_data(), a).d1, oracle_D1(a), 1e-7);
  EXPECT_NEAR(oracle_D1(a), pi * pi / 6, 1e-12);
}

TEST(H0, ZeroData) { EXPECT_EQ(eval_h0(zero_data(), {1, 2}), 0.0); }

TEST(H0, RejectsOrigin) { EXPECT_THROW(eval_h0(exact_data(), {0, 0}), InvalidInput); }

TEST(H0, Odd) {
  for (Frequency2D a : {Frequency2D{2 * pi, 4 * pi}, Frequency2D{1.3, -7.7}}) {
    const auto s = exact_quad().sample(a), m = exact_quad().sample(-a);
    EXPECT_NEAR(m.h0, -s.h0, 1e-10);
  }
}

TEST(Hj, EvenAndContractionVanishes) {
  for (Frequency2D a : {Frequency2D{2 * pi, 4 * pi}, Frequency2D{1.3, -7.7}, Frequency2D{-15.0, 22.5}}) {
    const auto s = exact_quad().sample(a), m = exact_quad().sample(-a);
    EXPECT_NEAR(m.h[0], s.h[0], 1e-10);
    EXPECT_NEAR(m.h[1], s.h[1], 1e-10);
    // Σ_j α_j(|α|²v_j − α_j(α·v)) = 0 for every term of h_j.
    const double scale = std::abs(a.alpha1 * s.h[0]) + std::abs(a.alpha2 * s.h[1]) + 1.0;
    EXPECT_NEAR(a.alpha1 * s.h[0] + a.alpha2 * s.h[1], 0.0, 1e-8 * scale);
  }
}

TEST(Hj, FreeFunctionsMatchSource) {
  const Frequency2D a{2 * pi, 4 * pi};
  const auto I = exact_data();
  const auto s = exact_quad().sample(a);
  EXPECT_NEAR(eval_h0(I, a), s.h0, 1e-12 * (1 + std::abs(s.h0)));
  EXPECT_NEAR(eval_hj(I, a, 1), s.h[0], 1e-12 * (1 + std::abs(s.h[0])));
  EXPECT_NEAR(eval_hj(I, a, 2), s.h[1], 1e-12 * (1 + std::abs(s.h[1])));
  EXPECT_NEAR(eval_gj(I, a, 1), s.g[0], 1e-12 * (1 + std::abs(s.g[0])));
  EXPECT_THROW(eval_hj(I, a, 3), InvalidInput);
}

TEST(Gj, ZeroData) {
  EXPECT_EQ(eval_gj(zero_data(), {1, 2}, 1), 0.0);
  EXPECT_EQ(eval_gj(zero_data(), {1, 2}, 2), 0.0);
}

TEST(Gj, PaperFactorAtOneOne) {
  const Frequency2D a{1, 1};
  const auto s = exact_quad().sample(a);
  const double P = std::sin(1.0) * std::sin(1.0) - (1 - std::cos(1.0)) * (1 - std::cos(1.0));
  const double expect = P * 2 / ((1 - 4 * pi * pi) * (1 - 16 * pi * pi));
  EXPECT_LT(rel(s.g[0] / s.d, expect), 1e-6);
}

TEST(Gj, MomentIdentityAtThreeFive) {
  const Frequency2D a{3, 5};
  const auto s = exact_quad().sample(a);
  EXPECT_NEAR(s.g[0] / (2 * s.d), domain_cosine_moment(exact_source().component(1), a).value, 1e-6);
}

TEST(Sample, Invariants) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 10; ++i) {
    const Frequency2D a{u(rng), u(rng)};
    const auto s = exact_quad().sample(a);
    EXPECT_EQ(s.d, s.d1 * s.d2);
    for (int j = 1; j <= 2; ++j) {
      const double g = (2 / a.norm2()) * (a.component(j) * s.d2 * s.h0 + s.d1 * s.h[j - 1]);
      EXPECT_EQ(s.g[j - 1], g);
    }
  }
}

TEST(Sample, ZeroDataGivesZeroSample) {
  const QuadratureSource q(zero_data(), {101, 101});
  const auto s = eval_sample(q, {2, 3});
  EXPECT_EQ(s.h0, 0.0);
  EXPECT_EQ(s.h[0], 0.0);
  EXPECT_EQ(s.h[1], 0.0);
  EXPECT_EQ(s.g[0], 0.0);
  EXPECT_EQ(s.g[1], 0.0);
  EXPECT_THROW(eval_sample(q, {0, 0}), InvalidInput);
}

TEST(Sample, ClosedFormMatchesQuadrature) {
  const Frequency2D a{2 * pi, 2 * pi};
  const auto q = exact_quad().sample(a);
  const auto c = ClosedFormSource().sample(a);
  EXPECT_LT(rel(q.d, c.d), 1e-6);
  EXPECT_NEAR(q.g[0], c.g[0], 1e-6 * std::abs(c.d));
  EXPECT_NEAR(q.g[1], c.g[1], 1e-6 * std::abs(c.d));
}

TEST(Sample, Parity) {
  for (Frequency2D a : {Frequency2D{2 * pi, 2 * pi}, Frequency2D{-3.1, 9.4}}) {
    const auto s = exact_quad().sample(a), m = exact_quad().sample(-a);
    EXPECT_NEAR(m.d, s.d, 1e-10);
    EXPECT_NEAR(m.d1, s.d1, 1e-10);
    EXPECT_NEAR(m.d2, s.d2, 1e-10);
    EXPECT_NEAR(m.g[0], s.g[0], 1e-10);
    EXPECT_NEAR(m.g[1], s.g[1], 1e-10);
  }
}

TEST(Sample, LinearInData) {
  const QuadratureOptions o{201, 201};
  const QuadratureSource full(perturbed_data(3), o), base(exact_data(), o), pert(perturbation_only(3), o);
  for (Frequency2D a : {Frequency2D{2.5, 4.0}, Frequency2D{-11.0, 6.5}}) {
    const auto f = full.sample(a), b = base.sample(a), p = pert.sample(a);
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(f.g[j], b.g[j] + p.g[j], 1e-12 * (std::abs(b.g[j]) + std::abs(p.g[j]) + 1e-3));
  }
}

TEST(Sample, ExactDataMomentIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-25, 25);
  const auto f1 = exact_poly(1), f2 = exact_poly(2);
  int checked = 0;
  while (checked < 12) {
    const Frequency2D a{u(rng), u(rng)};
    const auto s = exact_quad().sample(a);
    if (std::abs(s.d) <= 1e-3) continue;
    EXPECT_NEAR(s.g[0] / (2 * s.d), f1.cosine_moment(a), 1e-5);
    EXPECT_NEAR(s.g[1] / (2 * s.d), f2.cosine_moment(a), 1e-5);
    ++checked;
  }
}

TEST(Lattice, BatchMatchesPointwise) {
  const QuadratureSource q(perturbed_data(2), {201, 201});
  const auto L = FrequencyLattice::make(6.0, 1.0);
  const auto S = q.sample_lattice(L);
  for (std::size_t qq = 0; qq < L.size(); ++qq)
    for (std::size_t p = 0; p < L.size(); ++p) {
      if (!S.is_inside(p, qq)) continue;
      const auto& b = S.at(p, qq);
      const auto s = q.sample(b.alpha);
      EXPECT_NEAR(b.d, s.d, 1e-13);
      EXPECT_NEAR(b.h0, s.h0, 1e-11 * (1 + std::abs(s.h0)));
      EXPECT_NEAR(b.g[0], s.g[0], 1e-11 * (1 + std::abs(s.g[0])));
      EXPECT_NEAR(b.g[1], s.g[1], 1e-11 * (1 + std::abs(s.g[1])));
    }
}

TEST(Lattice, BatchIsParityExact) {
  const QuadratureSource q(exact_data(), {201, 201});
  const auto L = FrequencyLattice::make(8.0, 0.5);
  const auto S = q.sample_lattice(L);
  const std::size_t n = L.size();
  for (std::size_t qq = 0; qq < n; ++qq)
    for (std::size_t p = 0; p < n; ++p) {
      if (!S.is_inside(p, qq)) continue;
      const auto& a = S.at(p, qq);
      const auto& m = S.at(n - 1 - p, n - 1 - qq);
      EXPECT_EQ(a.d, m.d);
      EXPECT_NEAR(a.g[0], m.g[0], 1e-12);
      EXPECT_NEAR(a.h0, -m.h0, 1e-12);
    }
}

TEST(Memoized, WriteOnceAndThreadSafe) {
  auto inner = std::make_shared<ClosedFormSource>(4);
  const MemoizedSource memo(inner);
  std::vector<Frequency2D> alphas;
  for (int i = 1; i <= 50; ++i) alphas.push_back({0.37 * i, -0.21 * i});
  std::vector<std::thread> pool;
  std::vector<std::vector<double>> seen(4);
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (const auto& a : alphas) seen[t].push_back(memo.sample(a).g[0]);
    });
  for (auto& th : pool) th.join();
  EXPECT_EQ(memo.cached(), alphas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const double ref = inner->sample(alphas[i]).g[0];
    for (int t = 0; t < 4; ++t) EXPECT_EQ(seen[t][i], ref);
  }
}

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bodyforce/closed_form.hpp"
#include "bodyforce/errors.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/quadrature.hpp"
#include "bodyforce/regularizer.hpp"
#include "bodyforce/simpson.hpp"
#include "bodyforce/spectral.hpp"
#include "bodyforce/summation.hpp"

// The benchmark problem: T = 1, μ = 1/12, λ = −1/8, φ = (π²/3) sin πt,
// f_ex = (cos 2πx₁ cos 4πx₂, cos 4πx₁ cos 2πx₂), plus its n-perturbations.

namespace bodyforce::experiment {

inline constexpr double kPi = std::numbers::pi;

inline ElasticConstants constants() { return {-1.0 / 8.0, 1.0 / 12.0, 1.0}; }

/// Largest n for which sampled exports are produced.
inline constexpr int kMaxSampledN = 25;

inline double epsilon_for(int n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

/// sqrt(‖f_di − f_ex‖²) = sqrt(5n/8 − 9/(4n) + 9/(4n³))
inline double disturbed_error(int n) {
  const double x = n;
  return std::sqrt(5.0 * x / 8.0 - 9.0 / (4.0 * x) + 9.0 / (4.0 * x * x * x));
}

inline double phi(double t) { return kPi * kPi / 3.0 * std::sin(kPi * t); }

inline void require_n(int n) {
  if (n < 1) throw InvalidInput("experiment: n must be >= 1, got " + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Data

namespace detail {

using closed_form::Profile1D;
using closed_form::SeparableTerm;
using closed_form::TrigPolynomial;

inline double nn(int n) { return static_cast<double>(n); }

// Perturbation amplitude π/(12√n) of the traction.
inline double traction_amp(int n) { return kPi / (12.0 * std::sqrt(nn(n))); }

inline BoundaryTrace traction(std::optional<int> n) {
  return BoundaryTrace::from_traction(
      [n](double x1, double x2, double t, const std::array<double, 2>& nv) -> std::array<double, 2> {
        const double st = std::sin(kPi * t);
        double X1 = kPi / 6.0 * st * (std::sin(2 * kPi * x2) * nv[0] + std::sin(4 * kPi * x1) * nv[1]);
        double X2 = kPi / 6.0 * st * (std::sin(2 * kPi * x1) * nv[1] + std::sin(4 * kPi * x2) * nv[0]);
        if (n) {
          const double k = 2.0 * nn(*n) * kPi, a = traction_amp(*n);
          X1 += a * st * (std::sin(k * x2) * nv[0] + 2.0 * std::sin(k * x1) * nv[1]);
          X2 += a * st * (std::sin(k * x1) * nv[1] + 2.0 * std::sin(k * x2) * nv[0]);
        }
        return {X1, X2};
      },
      1.0);
}

inline ScalarField2D u0star(std::optional<int> n, int j) {
  return ScalarField2D::analytic([n, j](double x1, double x2) {
    double v = j == 1 ? kPi * std::sin(4 * kPi * x1) * std::sin(2 * kPi * x2)
                      : kPi * std::sin(2 * kPi * x1) * std::sin(4 * kPi * x2);
    if (n) {
      const double k = 2.0 * nn(*n) * kPi;
      v += kPi / (nn(*n) * std::sqrt(nn(*n))) * std::sin(k * x1) * std::sin(k * x2);
    }
    return v;
  });
}

inline ProblemData assemble(std::optional<int> n) {
  const auto k = constants();
  return ProblemData(k, TimeSignal::analytic(phi, k.T), traction(n), VectorField2D::zero(),
                     VectorField2D(u0star(n, 1), u0star(n, 2)), VectorField2D::zero());
}

}  // namespace detail

/// Exact data tuple, all members analytic.
inline ProblemData exact_data() { return detail::assemble(std::nullopt); }

/// n-perturbed data tuple, all members analytic.
inline ProblemData perturbed_data(int n) {
  require_n(n);
  return detail::assemble(n);
}

/// Highest spatial angular frequency present in the data of a case.
inline double max_frequency(std::optional<int> n) { return n ? std::max(4.0 * kPi, 2.0 * n.value() * kPi) : 4.0 * kPi; }

/// Rejects sampled exports that cannot represent the case.
inline void check_sampling(std::optional<int> n, std::size_t nodes) {
  if (n && *n > kMaxSampledN)
    throw InvalidInput("sampled data requested for n = " + std::to_string(*n) + "; sampled exports are limited to n <= " +
                       std::to_string(kMaxSampledN) + ", use the analytic case instead");
  if (!resolves_frequency(nodes, max_frequency(n)))
    throw InvalidInput("grid of " + std::to_string(nodes) + " nodes per axis has fewer than 4 nodes per period of "
                       "the data frequency; need at least " +
                       std::to_string(static_cast<long>(std::ceil(2.0 * max_frequency(n) / kPi)) + 1) + " nodes");
}

/// The data tuple sampled on grids: fields on nodes², traction on nodes × boundary_time_nodes,
/// φ on phi_nodes.
inline ProblemData sampled_data(std::optional<int> n, std::size_t nodes, std::size_t boundary_time_nodes,
                                std::size_t phi_nodes) {
  if (n) require_n(*n);
  check_sampling(n, nodes);
  const auto I = detail::assemble(n);
  const GridSpec g(nodes);
  auto sample_vec = [&](const VectorField2D& v) {
    return VectorField2D(v.component(1).sampled_on(g), v.component(2).sampled_on(g));
  };
  return ProblemData(I.constants, I.phi.resampled(phi_nodes), sample_boundary(I.X, nodes, boundary_time_nodes),
                     sample_vec(I.u0), sample_vec(I.u0star), sample_vec(I.uT));
}

// ---------------------------------------------------------------------------
// Sources f

/// f_ex,j as a closed-form trig polynomial.
inline closed_form::TrigPolynomial exact_poly(int j) {
  using closed_form::Profile1D;
  if (j == 1) return closed_form::TrigPolynomial({{1.0, Profile1D::cosine(2 * kPi), Profile1D::cosine(4 * kPi)}});
  return closed_form::TrigPolynomial({{1.0, Profile1D::cosine(4 * kPi), Profile1D::cosine(2 * kPi)}});
}

/// f_di,j for index n.
inline closed_form::TrigPolynomial disturbed_poly(int n, int j) {
  using closed_form::Profile1D;
  require_n(n);
  const double x = n, k = 2.0 * x * kPi;
  auto terms = exact_poly(j).terms();
  terms.push_back({1.5 * std::sqrt(x) - 3.0 / (x * std::sqrt(x)), Profile1D::sine(k), Profile1D::sine(k)});
  terms.push_back({std::sqrt(x) / 2.0, Profile1D::cosine(k), Profile1D::cosine(k)});
  return closed_form::TrigPolynomial(std::move(terms));
}

inline VectorField2D exact_source(const GridSpec& grid) {
  return VectorField2D(exact_poly(1).as_field().sampled_on(grid), exact_poly(2).as_field().sampled_on(grid));
}

inline VectorField2D exact_source() { return VectorField2D(exact_poly(1).as_field(), exact_poly(2).as_field()); }

inline VectorField2D disturbed_source(int n) {
  return VectorField2D(disturbed_poly(n, 1).as_field(), disturbed_poly(n, 2).as_field());
}

inline VectorField2D disturbed_source(int n, const GridSpec& grid) {
  require_n(n);
  if (!resolves_frequency(std::min(grid.nx(), grid.ny()), 2.0 * n * kPi))
    throw InvalidInput("disturbed_source: grid does not resolve frequency 2n*pi for n = " + std::to_string(n));
  const auto f = disturbed_source(n);
  return VectorField2D(f.component(1).sampled_on(grid), f.component(2).sampled_on(grid));
}

// ---------------------------------------------------------------------------
// Closed-form spectral oracles

inline double oracle_D1(const Frequency2D& a) { return closed_form::sine_profile_moment(a.norm() / (2.0 * std::sqrt(6.0))); }
inline double oracle_D2(const Frequency2D& a) { return closed_form::sine_profile_moment(a.norm() / (2.0 * std::sqrt(3.0))); }

/// 32π⁶ sin(|α|/2√6) sin(|α|/2√3)/((|α|²−24π²)(|α|²−12π²)), evaluated as the
/// product of its two singularity-free factors.
inline double oracle_D(const Frequency2D& a) { return oracle_D1(a) * oracle_D2(a); }

/// g₁ for the exact data (n empty) or the n-perturbed data.
inline double oracle_g1(const Frequency2D& a, std::optional<int> n = std::nullopt) {
  const double a1 = a.alpha1, a2 = a.alpha2;
  const auto x1 = closed_form::shifted_quotients(a1, 1.0);
  const auto x2 = closed_form::shifted_quotients(a2, 2.0);
  // P/((α₁²−4π²)(α₂²−16π²)) with P = sin α₁ sin α₂ − (1−cos α₁)(1−cos α₂)
  double bracket = 2.0 * a1 * a2 * (x1.sigma * x2.sigma - x1.kappa * x2.kappa);
  if (n) {
    require_n(*n);
    const double m = *n;
    const auto y1 = closed_form::shifted_quotients(a1, m);
    const auto y2 = closed_form::shifted_quotients(a2, m);
    bracket += std::sqrt(m) * (a1 * a2 + 12.0 * kPi * kPi * (2.0 - m * m)) * (y1.sigma * y2.sigma - y1.kappa * y2.kappa);
  }
  return oracle_D(a) * bracket;
}

/// g₂ follows from g₁ by the x₁ ↔ x₂ symmetry of the data.
inline double oracle_g2(const Frequency2D& a, std::optional<int> n = std::nullopt) {
  return oracle_g1({a.alpha2, a.alpha1}, n);
}

/// Spectral source built from the closed forms: D₁, D₂ and g from the
/// oracles, h from the cosine moments M of f via h₀ = D₁(α·M) and
/// h_j = D₂(|α|²M_j − α_j(α·M)).
class ClosedFormSource : public SpectralSource {
 public:
  explicit ClosedFormSource(std::optional<int> n = std::nullopt)
      : n_(n), f1_(n ? disturbed_poly(*n, 1) : exact_poly(1)), f2_(n ? disturbed_poly(*n, 2) : exact_poly(2)) {}

  std::string describe() const override {
    return n_ ? "closed-form perturbed:" + std::to_string(*n_) : std::string("closed-form exact");
  }

  SpectralSample sample(const Frequency2D& a) const override {
    if (a.norm() == 0.0) throw InvalidInput("closed-form source: alpha = 0 is excluded");
    SpectralSample s;
    s.alpha = a;
    s.d1 = oracle_D1(a);
    s.d2 = oracle_D2(a);
    s.d = s.d1 * s.d2;
    const std::array<double, 2> M{f1_.cosine_moment(a), f2_.cosine_moment(a)};
    const double dot = a.alpha1 * M[0] + a.alpha2 * M[1];
    s.h0 = s.d1 * dot;
    for (int j = 1; j <= 2; ++j)
      s.h[static_cast<std::size_t>(j - 1)] = s.d2 * (a.norm2() * M[static_cast<std::size_t>(j - 1)] - a.component(j) * dot);
    s.g = {oracle_g1(a, n_), oracle_g2(a, n_)};
    check_sample_finite(s);
    return s;
  }

 private:
  std::optional<int> n_;
  closed_form::TrigPolynomial f1_, f2_;
};

// ---------------------------------------------------------------------------
// Displacements, stresses and the PDE residual

/// u(x₁, x₂, t) = (u₁, u₂).
using Displacement = std::function<std::array<double, 2>(double x1, double x2, double t)>;

inline Displacement u_exact() {
  return [](double x1, double x2, double t) -> std::array<double, 2> {
    const double st = std::sin(kPi * t);
    return {st * std::sin(4 * kPi * x1) * std::sin(2 * kPi * x2), st * std::sin(2 * kPi * x1) * std::sin(4 * kPi * x2)};
  };
}

/// The variant with two identical components, kept to show it is not a solution.
inline Displacement u_exact_printed() {
  return [](double x1, double x2, double t) -> std::array<double, 2> {
    const double v = std::sin(kPi * t) * std::sin(4 * kPi * x1) * std::sin(2 * kPi * x2);
    return {v, v};
  };
}

inline Displacement u_disturbed(int n) {
  require_n(n);
  const double x = n, k = 2.0 * x * kPi;
  return [x, k](double x1, double x2, double t) -> std::array<double, 2> {
    auto u = u_exact()(x1, x2, t);
    const double p = std::sin(kPi * t) * std::sin(k * x1) * std::sin(k * x2) / (x * std::sqrt(x));
    return {u[0] + p, u[1] + p};
  };
}

/// Traction (X₁, X₂) = (n₁σ₁ + n₂τ, n₂σ₂ + n₁τ) of u on every edge; spatial
/// derivatives by central differences with step 1e-6.
inline BoundaryTrace compute_surface_stress(Displacement u, const ElasticConstants& k) {
  k.validate();
  return BoundaryTrace::from_traction(
      [u = std::move(u), k](double x1, double x2, double t, const std::array<double, 2>& nv) -> std::array<double, 2> {
        constexpr double h = 1e-6;
        const auto xp = u(x1 + h, x2, t), xm = u(x1 - h, x2, t);
        const auto yp = u(x1, x2 + h, t), ym = u(x1, x2 - h, t);
        const double d11 = (xp[0] - xm[0]) / (2 * h), d21 = (xp[1] - xm[1]) / (2 * h);  // ∂₁u₁, ∂₁u₂
        const double d12 = (yp[0] - ym[0]) / (2 * h), d22 = (yp[1] - ym[1]) / (2 * h);  // ∂₂u₁, ∂₂u₂
        const double div = d11 + d22;
        const double s1 = k.lambda * div + 2 * k.mu * d11;
        const double s2 = k.lambda * div + 2 * k.mu * d22;
        const double tau = k.mu * (d12 + d21);
        return {nv[0] * s1 + nv[1] * tau, nv[1] * s2 + nv[0] * tau};
      },
      k.T);
}

struct Probe {
  double x1, x2, t;
};

/// Uniform random probes in [margin, 1−margin]² × [margin·T, (1−margin)·T].
inline std::vector<Probe> random_probes(std::size_t count, double T, std::uint64_t seed = 20240611,
                                        double margin = 0.01) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> s(margin, 1.0 - margin);
  std::vector<Probe> out(count);
  for (auto& p : out) {
    p.x1 = s(rng);
    p.x2 = s(rng);
    p.t = s(rng) * T;
  }
  return out;
}

/// max over probes and j of |∂²u_j/∂t² − μΔu_j − (λ+μ)∂_j div u − φ f_j|, with
/// fourth-order central differences of step h.
inline double pde_residual(const Displacement& u, const VectorField2D& f, const std::function<double(double)>& phi_fn,
                           const ElasticConstants& k, const std::vector<Probe>& probes, double h = 1e-3) {
  k.validate();
  if (f.component(1).is_sampled()) throw InvalidInput("pde_residual: f must be analytic");
  // Second derivative along one direction: (−f₂ + 16f₁ − 30f₀ + 16f₋₁ − f₋₂)/(12h²).
  auto d2 = [h](auto&& g) {
    return (-g(2 * h) + 16 * g(h) - 30 * g(0.0) + 16 * g(-h) - g(-2 * h)) / (12 * h * h);
  };
  // First derivative: (f₋₂ − 8f₋₁ + 8f₁ − f₂)/(12h).
  auto d1 = [h](auto&& g) { return (g(-2 * h) - 8 * g(-h) + 8 * g(h) - g(2 * h)) / (12 * h); };
  double worst = 0.0;
  for (const auto& p : probes) {
    if (p.x1 - 2 * h <= 0 || p.x1 + 2 * h >= 1 || p.x2 - 2 * h <= 0 || p.x2 + 2 * h >= 1 || p.t - 2 * h <= 0 ||
        p.t + 2 * h >= k.T)
      throw InvalidInput("pde_residual: probe too close to the boundary of the space-time domain");
    for (int j = 0; j < 2; ++j) {
      const double utt = d2([&](double e) { return u(p.x1, p.x2, p.t + e)[j]; });
      const double uxx = d2([&](double e) { return u(p.x1 + e, p.x2, p.t)[j]; });
      const double uyy = d2([&](double e) { return u(p.x1, p.x2 + e, p.t)[j]; });
      // ∂_j div u = ∂_j∂₁u₁ + ∂_j∂₂u₂
      double grad_div;
      if (j == 0) {
        const double u1xx = d2([&](double e) { return u(p.x1 + e, p.x2, p.t)[0]; });
        const double u2xy = d1([&](double e) { return d1([&](double s) { return u(p.x1 + e, p.x2 + s, p.t)[1]; }); });
        grad_div = u1xx + u2xy;
      } else {
        const double u1xy = d1([&](double e) { return d1([&](double s) { return u(p.x1 + e, p.x2 + s, p.t)[0]; }); });
        const double u2yy = d2([&](double e) { return u(p.x1, p.x2 + e, p.t)[1]; });
        grad_div = u1xy + u2yy;
      }
      const double r = utt - k.mu * (uxx + uyy) - (k.lambda + k.mu) * grad_div - phi_fn(p.t) * f.component(j + 1)(p.x1, p.x2);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Perturbation norms

struct PerturbationNorms {
  std::array<double, 2> X_l1{};        // ‖X_jⁿ − X_j‖ in L¹(0,T; ∂Ω)
  std::array<double, 2> u0star_l1{};   // ‖u₀*ⱼⁿ − u₀*ⱼ‖ in L¹(Ω)
  std::array<double, 2> f_l2_sq{};     // ‖f_di,jⁿ − f_ex,j‖² in L²(Ω)
};

/// Node count whose intervals put a node on every zero of sin(2nπx).
inline std::size_t kink_aligned_nodes(int n, std::size_t target = 2000) {
  const std::size_t step = 4 * static_cast<std::size_t>(n);
  return step * ((target + step - 1) / step) + 1;
}

inline PerturbationNorms perturbation_norms(int n) {
  require_n(n);
  PerturbationNorms out;
  const std::size_t N = kink_aligned_nodes(n);
  const GridSpec g(N);
  const auto Ie = exact_data(), In = perturbed_data(n);

  // Boundary: integrand |X^n − X| on each edge, Simpson in s and t.
  const std::size_t nt = 401;
  const auto ws = simpson_weights(N, 1.0 / static_cast<double>(N - 1));
  const auto wt = simpson_weights(nt, Ie.constants.T / static_cast<double>(nt - 1));
  for (int c = 1; c <= 2; ++c) {
    CompensatedSum total;
    for (Edge e : kEdges) {
      const auto& a = In.X.component(e, c);
      const auto& b = Ie.X.component(e, c);
      for (std::size_t k = 0; k < nt; ++k) {
        const double t = static_cast<double>(k) * Ie.constants.T / static_cast<double>(nt - 1);
        CompensatedSum row;
        for (std::size_t m = 0; m < N; ++m) {
          const double s = g.x(m);
          row.add(ws[m] * std::abs(a(s, t) - b(s, t)));
        }
        total.add(wt[k] * row.value());
      }
    }
    out.X_l1[static_cast<std::size_t>(c - 1)] = total.value();
  }

  for (int c = 1; c <= 2; ++c) {
    const auto& a = In.u0star.component(c);
    const auto& b = Ie.u0star.component(c);
    const auto diff = ScalarField2D::sampled(g, [&] {
      std::vector<double> v(g.size());
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) v[g.index(i, j)] = std::abs(a(g.x(j), g.y(i)) - b(g.x(j), g.y(i)));
      return v;
    }());
    // L¹ of a nonnegative field is its Simpson integral.
    out.u0star_l1[static_cast<std::size_t>(c - 1)] = integral(diff);
  }

  for (int c = 1; c <= 2; ++c) {
    const auto fd = disturbed_poly(n, c), fe = exact_poly(c);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) v[g.index(i, j)] = fd(g.x(j), g.y(i)) - fe(g.x(j), g.y(i));
    const double l2 = l2_norm(ScalarField2D::sampled(g, std::move(v)));
    out.f_l2_sq[static_cast<std::size_t>(c - 1)] = l2 * l2;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectral inequalities

struct TailBoundResult {
  double lhs = 0.0;         // ∫ over r ≤ |α| < 50r of the squared cosine moment
  double truncation = 0.0;  // |2π²‖w‖² − ∫_{B(0,50r)}|, bounds the neglected |α| ≥ 50r part
  double rhs = 0.0;         // (72√2π/r)‖w‖²_{H¹}
  bool pass = false;        // lhs + truncation ≤ rhs
};

/// Tail inequality for a trig polynomial: the squared cosine moment integrated
/// over |α| ≥ r against (72√2π/r)‖w‖²_{H¹}. The tail beyond 50r is not
/// integrated; by Parseval the full-plane integral equals 2π²‖w‖²_{L²}, and
/// the gap to the computed disk integral is added as a conservative allowance.
inline TailBoundResult tail_bound_check(const closed_form::TrigPolynomial& w, double r, double spacing = 0.25,
                                        std::size_t h1_nodes = 401) {
  if (!(r > kPi / (2.0 * std::sqrt(2.0)))) throw InvalidInput("tail_bound_check: requires r > pi/(2 sqrt 2)");
  TailBoundResult out;
  const GridSpec g(h1_nodes);
  const auto ws = w.as_field().sampled_on(g);
  const double h1 = h1_norm(ws);
  out.rhs = 72.0 * std::sqrt(2.0) * kPi / r * h1 * h1;
  if (w.terms().empty()) {
    out.pass = true;
    return out;
  }

  // Moments factor per term into 1D profiles, precomputed on the lattice axis.
  const auto L = FrequencyLattice::make(50.0 * r, spacing);
  const std::size_t n = L.size(), nterms = w.terms().size();
  std::vector<closed_form::Moment1D> mx(nterms * n), my(nterms * n);
  for (std::size_t t = 0; t < nterms; ++t)
    for (std::size_t p = 0; p < n; ++p) {
      mx[t * n + p] = w.terms()[t].px.moment(L.axis[p]);
      my[t * n + p] = w.terms()[t].py.moment(L.axis[p]);
    }
  std::vector<double> inner(n), outer(n);
  parallel_for(n, [&](std::size_t q) {
    CompensatedSum in, out_;
    for (std::size_t p = 0; p < n; ++p) {
      const double rad = std::hypot(L.axis[p], L.axis[q]);
      if (!(rad < L.radius)) continue;
      double m = 0.0;
      for (std::size_t t = 0; t < nterms; ++t) {
        const auto& a = mx[t * n + p];
        const auto& b = my[t * n + q];
        m += w.terms()[t].coef * (a.c * b.c - a.s * b.s);
      }
      (rad < r ? in : out_).add(m * m);
    }
    inner[q] = in.value();
    outer[q] = out_.value();
  });
  CompensatedSum si, so;
  for (std::size_t q = 0; q < n; ++q) {
    si.add(inner[q]);
    so.add(outer[q]);
  }
  const double area = L.cell_area();
  out.lhs = so.value() * area;
  const double l2 = l2_norm(ws);
  out.truncation = std::abs(2.0 * kPi * kPi * l2 * l2 - (si.value() + so.value()) * area);
  out.pass = out.lhs + out.truncation <= out.rhs;
  return out;
}

struct ParsevalResult {
  double lhs = 0.0;             // ∫_{−A}^{A} |∫₀¹ w sin(a + αx) dx|² dα
  double tail_bound = 0.0;      // bound on the neglected |α| > A part
  double rhs = 0.0;             // π‖w‖²_{L²(0,1)}
  double relative_error = 0.0;  // |lhs − rhs|/rhs (0 when rhs = 0)
};

/// One-dimensional Parseval identity for a trig polynomial in x, phase a.
/// Truncated at |α| = cutoff with Simpson step `step`; since |α·moment| ≤ V
/// with V = Σ|c|(|p(0)| + |p(1)| + ∫|p'|), the tail is at most 2V²/cutoff.
inline ParsevalResult parseval_check(const std::vector<std::pair<double, closed_form::Profile1D>>& w, double a,
                                     double cutoff = 1e4, double step = 0.05) {
  ParsevalResult out;
  if (w.empty()) return out;
  const auto nodes = static_cast<std::size_t>(std::llround(2.0 * cutoff / step)) + 1;
  require_simpson_count(nodes, "parseval_check");
  const double h = 2.0 * cutoff / static_cast<double>(nodes - 1);
  const auto wts = simpson_weights(nodes, h);
  const double sa = std::sin(a), ca = std::cos(a);
  CompensatedSum lhs;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double al = -cutoff + static_cast<double>(k) * h;
    double m = 0.0;
    for (const auto& [c, p] : w) {
      const auto mo = p.moment(al);
      // sin(a + αx) = sin a cos αx + cos a sin αx
      m += c * (sa * mo.c + ca * mo.s);
    }
    lhs.add(wts[k] * m * m);
  }
  out.lhs = lhs.value();

  double V = 0.0;
  for (const auto& [c, p] : w) {
    double var = 0.0;
    switch (p.kind) {
      case closed_form::Profile1D::Kind::Const: var = 0.0; break;
      case closed_form::Profile1D::Kind::Linear: var = 1.0; break;
      default: var = std::abs(p.k); break;
    }
    V += std::abs(c) * (std::abs(p(0.0)) + std::abs(p(1.0)) + var);
  }
  out.tail_bound = 2.0 * V * V / cutoff;

  // ‖w‖² by fine Simpson in x.
  const std::size_t nx = 20001;
  const auto wx = simpson_weights(nx, 1.0 / static_cast<double>(nx - 1));
  CompensatedSum sq;
  for (std::size_t j = 0; j < nx; ++j) {
    const double x = static_cast<double>(j) / static_cast<double>(nx - 1);
    double v = 0.0;
    for (const auto& [c, p] : w) v += c * p(x);
    sq.add(wx[j] * v * v);
  }
  out.rhs = kPi * sq.value();
  out.relative_error = out.rhs > 0.0 ? std::abs(out.lhs - out.rhs) / out.rhs : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Convergence sweep

struct SweepRow {
  int n = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double R = 0.0;
  std::array<double, 2> l2_err{};
  std::array<double, 2> linf_err{};
  double disturbed_l2_err = 0.0;
};

struct SweepOptions {
  std::size_t grid_nodes = 101;
  std::optional<double> spacing;  // frequency lattice spacing; default min(0.25, R/200)
};

/// Closed-form-backed reconstruction for each n with ε = n^{−1/2}, practical
/// radius, errors against f_ex on the output grid.
inline std::vector<SweepRow> convergence_sweep(const std::vector<int>& n_list, const SweepOptions& opts = {}) {
  if (n_list.empty()) throw InvalidInput("convergence_sweep: empty n list");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    require_n(n_list[i]);
    if (n_list[i] < 2) throw InvalidInput("convergence_sweep: n must be >= 2 so that epsilon < 1");
    if (i && n_list[i] <= n_list[i - 1]) throw InvalidInput("convergence_sweep: n list must be strictly ascending");
  }
  const GridSpec grid(opts.grid_nodes);
  const auto fex = exact_source(grid);
  std::vector<SweepRow> rows;
  for (int n : n_list) {
    SweepRow row;
    row.n = n;
    row.epsilon = epsilon_for(n);
    const auto params = select_params(row.epsilon, constants().T, RegMode::Practical);
    row.delta = params.delta;
    row.R = params.R;
    const ClosedFormSource src(n);
    const auto rec = reconstruct(src, params, grid, opts.spacing);
    for (int j = 1; j <= 2; ++j) {
      const auto diff = difference(j == 1 ? rec.f1 : rec.f2, fex.component(j));
      row.l2_err[static_cast<std::size_t>(j - 1)] = l2_norm(diff);
      row.linf_err[static_cast<std::size_t>(j - 1)] = linf_norm(diff);
    }
    row.disturbed_l2_err = disturbed_error(n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bodyforce::experiment

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/parallel.hpp"
#include "bodyforce/simpson.hpp"
#include "bodyforce/summation.hpp"

namespace bodyforce {

struct Frequency2D {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  double norm() const { return std::hypot(alpha1, alpha2); }
  double norm2() const { return alpha1 * alpha1 + alpha2 * alpha2; }
  // j in {1, 2}
  double component(int j) const { return j == 1 ? alpha1 : alpha2; }
  Frequency2D operator-() const { return {-alpha1, -alpha2}; }
};

/// Node counts used when an analytic function has to be sampled.
struct QuadratureOptions {
  std::size_t space_nodes = 401;
  std::size_t time_nodes = 2001;
};

// ---------------------------------------------------------------------------
// Time moments

/// ∫₀ᵀ φ(T−t) sin(ωt) dt by composite Simpson.
inline double sine_moment(const TimeSignal& phi, double omega, double T, std::size_t nodes = 2001) {
  if (!std::isfinite(omega)) throw InvalidInput("sine_moment: omega must be finite");
  if (phi.T() != T) throw InvalidInput("sine_moment: signal horizon differs from T");
  if (omega == 0.0) return 0.0;
  const TimeSignal s = phi.resampled(nodes);
  const auto v = s.samples();
  const std::size_t nt = v.size();
  const double dt = T / static_cast<double>(nt - 1);
  const auto w = simpson_weights(nt, dt);
  CompensatedSum acc;
  // φ(T − t_k) is the mirrored sample v[nt−1−k].
  for (std::size_t k = 0; k < nt; ++k) acc.add(w[k] * v[nt - 1 - k] * std::sin(omega * static_cast<double>(k) * dt));
  return acc.value();
}

// ---------------------------------------------------------------------------
// Domain cosine moments

struct MomentResult {
  double value = 0.0;
  bool aliased = false;  // fewer than 4 nodes per period of the larger |α_i|
};

namespace quad_detail {

// ∫∫ v(x1,x2) [cx(x1)cy(x2) − sx(x1)sy(x2)] with tensor Simpson weights.
inline double tensor_cosine(const GridSpec& g, std::span<const double> v, double a1, double a2) {
  const std::size_t nx = g.nx(), ny = g.ny();
  const auto wx = simpson_weights(nx, g.hx());
  const auto wy = simpson_weights(ny, g.hy());
  std::vector<double> cx(nx), sx(nx);
  for (std::size_t j = 0; j < nx; ++j) {
    const double x = g.x(j);
    cx[j] = wx[j] * std::cos(a1 * x);
    sx[j] = wx[j] * std::sin(a1 * x);
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < ny; ++i) {
    const double y = g.y(i);
    const auto row = v.subspan(i * nx, nx);
    const double rc = compensated_dot(row, cx);
    const double rs = compensated_dot(row, sx);
    total.add(wy[i] * (std::cos(a2 * y) * rc - std::sin(a2 * y) * rs));
  }
  return total.value();
}

}  // namespace quad_detail

/// ∫_Ω w(x) cos(α·x) dx. Sampled fields use their own grid; analytic fields
/// are sampled on a space_nodes² grid.
inline MomentResult domain_cosine_moment(const ScalarField2D& w, const Frequency2D& alpha,
                                         std::size_t space_nodes = 401) {
  if (!std::isfinite(alpha.alpha1) || !std::isfinite(alpha.alpha2))
    throw InvalidInput("domain_cosine_moment: non-finite frequency");
  if (w.is_zero()) return {};
  if (w.is_sampled()) {
    const auto& g = w.grid();
    const double amax = std::max(std::abs(alpha.alpha1), std::abs(alpha.alpha2));
    const bool aliased = !resolves_frequency(std::min(g.nx(), g.ny()), amax);
    return {quad_detail::tensor_cosine(g, w.values(), alpha.alpha1, alpha.alpha2), aliased};
  }
  const GridSpec g(space_nodes);
  const auto s = w.sampled_on(g);
  return {quad_detail::tensor_cosine(g, s.values(), alpha.alpha1, alpha.alpha2), false};
}

// ---------------------------------------------------------------------------
// Boundary space-time moments

/// The two boundary kernels: (α·X), or |α|²X_j − α_j(α·X).
struct TractionKernel {
  enum class Kind { AlphaDotX, Transverse };
  Kind kind = Kind::AlphaDotX;
  int j = 1;

  static TractionKernel alpha_dot() { return {Kind::AlphaDotX, 1}; }
  static TractionKernel transverse(int j) {
    if (j != 1 && j != 2) throw InvalidInput("traction kernel: component index must be 1 or 2");
    return {Kind::Transverse, j};
  }

  double apply(const Frequency2D& a, double x1, double x2) const {
    const double dot = a.alpha1 * x1 + a.alpha2 * x2;
    if (kind == Kind::AlphaDotX) return dot;
    return a.norm2() * (j == 1 ? x1 : x2) - a.component(j) * dot;
  }
};

/// Time profiles P_c(t_k) = ∫_∂Ω X_c(x, t_k) cos(α·x) dω for c = 1, 2, with
/// the edges accumulated in the order bottom, right, top, left.
struct BoundaryProfile {
  double T = 1.0;
  std::vector<double> p1;
  std::vector<double> p2;
  bool zero = true;
};

namespace quad_detail {

// Common (ns, nt) of a sampled boundary trace; throws if edges disagree.
inline std::pair<std::size_t, std::size_t> sampled_shape(const BoundaryTrace& X) {
  std::size_t ns = 0, nt = 0;
  for (Edge e : kEdges)
    for (int c = 1; c <= 2; ++c) {
      const auto& tr = X.component(e, c);
      if (!tr.is_sampled()) continue;
      if (nt == 0) {
        ns = tr.ns();
        nt = tr.nt();
      } else if (tr.nt() != nt || tr.ns() != ns) {
        throw InvalidInput("boundary trace: all sampled edges must share ns and nt");
      }
    }
  return {ns, nt};
}

}  // namespace quad_detail

/// Samples any analytic edge of X on ns × nt nodes; sampled edges must already match.
inline BoundaryTrace sample_boundary(const BoundaryTrace& X, std::size_t ns, std::size_t nt) {
  std::array<BoundaryTrace::EdgeComponents, 4> parts{
      BoundaryTrace::EdgeComponents{EdgeTrace::zero(X.T()), EdgeTrace::zero(X.T())},
      BoundaryTrace::EdgeComponents{EdgeTrace::zero(X.T()), EdgeTrace::zero(X.T())},
      BoundaryTrace::EdgeComponents{EdgeTrace::zero(X.T()), EdgeTrace::zero(X.T())},
      BoundaryTrace::EdgeComponents{EdgeTrace::zero(X.T()), EdgeTrace::zero(X.T())}};
  for (Edge e : kEdges)
    for (int c = 1; c <= 2; ++c) {
      const auto& tr = X.component(e, c);
      parts[static_cast<std::size_t>(e)][static_cast<std::size_t>(c - 1)] =
          tr.is_zero() && !tr.is_sampled() ? tr : tr.sampled_on(ns, nt);
    }
  return BoundaryTrace(X.T(), std::move(parts));
}

inline BoundaryProfile boundary_cosine_profile(const BoundaryTrace& X, const Frequency2D& alpha,
                                               const QuadratureOptions& opts = {}) {
  BoundaryProfile prof;
  prof.T = X.T();
  if (X.is_zero()) return prof;
  auto [ns, nt] = quad_detail::sampled_shape(X);
  if (nt == 0) {
    ns = opts.space_nodes;
    nt = opts.time_nodes;
  }
  const BoundaryTrace S = sample_boundary(X, ns, nt);
  prof.p1.assign(nt, 0.0);
  prof.p2.assign(nt, 0.0);
  prof.zero = false;
  const double ds = 1.0 / static_cast<double>(ns - 1);
  const auto ws = simpson_weights(ns, ds);
  std::array<std::vector<double>, 4> kern;
  for (Edge e : kEdges) {
    auto& k = kern[static_cast<std::size_t>(e)];
    k.resize(ns);
    for (std::size_t m = 0; m < ns; ++m) {
      const auto x = edge_point(e, static_cast<double>(m) * ds);
      k[m] = ws[m] * std::cos(alpha.alpha1 * x[0] + alpha.alpha2 * x[1]);
    }
  }
  for (int c = 1; c <= 2; ++c) {
    auto& p = c == 1 ? prof.p1 : prof.p2;
    for (std::size_t t = 0; t < nt; ++t) {
      CompensatedSum acc;
      for (Edge e : kEdges) {
        const auto& tr = S.component(e, c);
        if (tr.is_zero()) continue;
        acc.add(compensated_dot(tr.values().subspan(t * ns, ns), kern[static_cast<std::size_t>(e)]));
      }
      p[t] = acc.value();
    }
  }
  return prof;
}

/// ∫₀ᵀ sin(ω(T−t)) K(P₁(t), P₂(t)) dt for a precomputed boundary profile.
inline double profile_time_moment(const BoundaryProfile& prof, double omega, const TractionKernel& kernel,
                                  const Frequency2D& alpha) {
  if (prof.zero || omega == 0.0) return 0.0;
  const std::size_t nt = prof.p1.size();
  const double dt = prof.T / static_cast<double>(nt - 1);
  const auto w = simpson_weights(nt, dt);
  CompensatedSum acc;
  for (std::size_t k = 0; k < nt; ++k) {
    const double t = static_cast<double>(k) * dt;
    acc.add(w[k] * std::sin(omega * (prof.T - t)) * kernel.apply(alpha, prof.p1[k], prof.p2[k]));
  }
  return acc.value();
}

/// ∫₀ᵀ ∫_∂Ω sin(ω(T−t)) m(X, α) cos(α·x) dω dt with m the given kernel.
inline double boundary_spacetime_moment(const BoundaryTrace& X, double omega, const TractionKernel& kernel,
                                        const Frequency2D& alpha, double T, const QuadratureOptions& opts = {}) {
  if (X.T() != T) throw InvalidInput("boundary_spacetime_moment: trace horizon differs from T");
  if (!std::isfinite(omega)) throw InvalidInput("boundary_spacetime_moment: omega must be finite");
  if (X.is_zero() || omega == 0.0) return 0.0;
  return profile_time_moment(boundary_cosine_profile(X, alpha, opts), omega, kernel, alpha);
}

// ---------------------------------------------------------------------------
// Frequency-space disk integrals

/// Symmetric cell-centred lattice on [−KΔ, KΔ]²: axis nodes ±(k + ½)Δ, so the
/// origin is never a node and every node has its mirror image.
struct FrequencyLattice {
  double spacing = 0.25;
  double radius = 1.0;
  std::vector<double> axis;

  static double default_spacing(double R) { return std::min(0.25, R / 200.0); }

  static FrequencyLattice make(double R, double spacing) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidInput("frequency lattice: R must be finite and > 0");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
      throw InvalidInput("frequency lattice: spacing must be finite and > 0");
    FrequencyLattice L;
    L.spacing = spacing;
    L.radius = R;
    const auto K = static_cast<std::size_t>(std::ceil(R / spacing));
    L.axis.resize(2 * K);
    for (std::size_t k = 0; k < 2 * K; ++k)
      L.axis[k] = (static_cast<double>(k) - static_cast<double>(K) + 0.5) * spacing;
    return L;
  }
  static FrequencyLattice make(double R) { return make(R, default_spacing(R)); }

  std::size_t size() const { return axis.size(); }
  double cell_area() const { return spacing * spacing; }
  bool inside(std::size_t p, std::size_t q) const { return std::hypot(axis[p], axis[q]) < radius; }
};

/// ∫_{B(0,R)} g(α) dα by the midpoint rule on a FrequencyLattice, rows reduced
/// in fixed order.
inline double disk_quadrature(const std::function<double(const Frequency2D&)>& g, double R, double spacing) {
  const auto L = FrequencyLattice::make(R, spacing);
  const std::size_t n = L.size();
  std::vector<double> rows(n);
  parallel_for(n, [&](std::size_t q) {
    CompensatedSum acc;
    for (std::size_t p = 0; p < n; ++p) {
      if (!L.inside(p, q)) continue;
      const Frequency2D a{L.axis[p], L.axis[q]};
      const double v = g(a);
      if (!std::isfinite(v))
        throw NumericError("disk_quadrature: non-finite integrand at alpha = (" + std::to_string(a.alpha1) + ", " +
                           std::to_string(a.alpha2) + ")");
      acc.add(v);
    }
    rows[q] = acc.value();
  });
  CompensatedSum total;
  for (double r : rows) total.add(r);
  return total.value() * L.cell_area();
}

inline double disk_quadrature(const std::function<double(const Frequency2D&)>& g, double R) {
  return disk_quadrature(g, R, FrequencyLattice::default_spacing(R));
}

}  // namespace bodyforce

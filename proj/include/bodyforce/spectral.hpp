#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <utility>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/parallel.hpp"
#include "bodyforce/quadrature.hpp"
#include "bodyforce/simpson.hpp"
#include "bodyforce/summation.hpp"

namespace bodyforce {

/// Spectral quantities at one frequency.
struct SpectralSample {
  Frequency2D alpha;
  double d1 = 0.0;
  double d2 = 0.0;
  double d = 0.0;
  double h0 = 0.0;
  std::array<double, 2> h{0.0, 0.0};
  std::array<double, 2> g{0.0, 0.0};
};

/// Samples on the nodes of a FrequencyLattice that lie inside its disk.
/// Storage is row-major: index q·n + p holds α = (axis[p], axis[q]).
struct LatticeSamples {
  FrequencyLattice lattice;
  std::vector<SpectralSample> data;
  std::vector<std::uint8_t> inside;

  std::size_t n() const { return lattice.size(); }
  const SpectralSample& at(std::size_t p, std::size_t q) const { return data[q * n() + p]; }
  bool is_inside(std::size_t p, std::size_t q) const { return inside[q * n() + p] != 0; }
};

inline void check_sample_finite(const SpectralSample& s) {
  const double vals[] = {s.d1, s.d2, s.d, s.h0, s.h[0], s.h[1], s.g[0], s.g[1]};
  for (double v : vals)
    if (!std::isfinite(v))
      throw NumericError("non-finite spectral sample at alpha = (" + std::to_string(s.alpha.alpha1) + ", " +
                         std::to_string(s.alpha.alpha2) + ")");
}

/// Evaluable α ↦ SpectralSample.
class SpectralSource {
 public:
  virtual ~SpectralSource() = default;
  virtual SpectralSample sample(const Frequency2D& alpha) const = 0;
  virtual std::string describe() const = 0;

  /// Samples every lattice node inside the disk. Subclasses may override with
  /// a batched evaluation; results must not depend on the thread count.
  virtual LatticeSamples sample_lattice(const FrequencyLattice& L) const {
    LatticeSamples out = empty_lattice(L);
    const std::size_t n = L.size();
    parallel_for(n, [&](std::size_t q) {
      for (std::size_t p = 0; p < n; ++p)
        if (out.inside[q * n + p]) out.data[q * n + p] = sample({L.axis[p], L.axis[q]});
    });
    return out;
  }

 protected:
  static LatticeSamples empty_lattice(const FrequencyLattice& L) {
    LatticeSamples out;
    out.lattice = L;
    const std::size_t n = L.size();
    out.data.resize(n * n);
    out.inside.resize(n * n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p) {
        out.inside[q * n + p] = L.inside(p, q) ? 1 : 0;
        out.data[q * n + p].alpha = {L.axis[p], L.axis[q]};
      }
    return out;
  }
};

inline SpectralSample eval_sample(const SpectralSource& src, const Frequency2D& alpha) {
  if (alpha.norm() == 0.0) throw InvalidInput("eval_sample: alpha = 0 is excluded");
  return src.sample(alpha);
}

// ---------------------------------------------------------------------------
// Assembly of h0, h_j, g_j from their parts

namespace spectral_detail {

using Pair = std::array<double, 2>;

/// Cosine moments of the three displacement snapshots, per component.
struct DomainMoments {
  Pair u0{0.0, 0.0};
  Pair u0star{0.0, 0.0};
  Pair uT{0.0, 0.0};
};

/// Boundary terms: b0 with kernel (α·X) at the pressure frequency, b[j] with
/// the transverse kernel at the shear frequency.
struct BoundaryTerms {
  double b0 = 0.0;
  Pair b{0.0, 0.0};
};

inline double dot(const Frequency2D& a, const Pair& m) { return a.alpha1 * m[0] + a.alpha2 * m[1]; }

inline double transverse(const Frequency2D& a, const Pair& m, int j) {
  return a.norm2() * m[static_cast<std::size_t>(j - 1)] - a.component(j) * dot(a, m);
}

inline double h0_from(const ElasticConstants& k, const Frequency2D& a, const DomainMoments& m, double b0) {
  const double w = k.p_speed() * a.norm();
  double h = -std::sin(w * k.T) * dot(a, m.u0star);
  h += w * dot(a, m.uT);
  h -= w * std::cos(w * k.T) * dot(a, m.u0);
  h -= b0;
  return h;
}

inline double hj_from(const ElasticConstants& k, const Frequency2D& a, const DomainMoments& m, double bj, int j) {
  const double w = k.s_speed() * a.norm();
  double h = -std::sin(w * k.T) * transverse(a, m.u0star, j);
  h += w * transverse(a, m.uT, j);
  h -= w * std::cos(w * k.T) * transverse(a, m.u0, j);
  h -= bj;
  return h;
}

inline double gj_from(const Frequency2D& a, double d1, double d2, double h0, double hj, int j) {
  return (2.0 / a.norm2()) * (a.component(j) * d2 * h0 + d1 * hj);
}

inline SpectralSample assemble(const ElasticConstants& k, const Frequency2D& a, double d1, double d2,
                               const DomainMoments& m, const BoundaryTerms& b) {
  SpectralSample s;
  s.alpha = a;
  s.d1 = d1;
  s.d2 = d2;
  s.d = d1 * d2;
  s.h0 = h0_from(k, a, m, b.b0);
  for (int j = 1; j <= 2; ++j) s.h[static_cast<std::size_t>(j - 1)] = hj_from(k, a, m, b.b[static_cast<std::size_t>(j - 1)], j);
  for (int j = 1; j <= 2; ++j)
    s.g[static_cast<std::size_t>(j - 1)] = gj_from(a, d1, d2, s.h0, s.h[static_cast<std::size_t>(j - 1)], j);
  check_sample_finite(s);
  return s;
}

inline void require_nonzero(const Frequency2D& a, const char* what) {
  if (!std::isfinite(a.alpha1) || !std::isfinite(a.alpha2))
    throw InvalidInput(std::string(what) + ": non-finite frequency");
  if (a.norm() == 0.0) throw InvalidInput(std::string(what) + ": alpha = 0 is excluded");
}

inline Pair vector_moment(const VectorField2D& v, const Frequency2D& a, std::size_t nodes) {
  return {domain_cosine_moment(v.component(1), a, nodes).value, domain_cosine_moment(v.component(2), a, nodes).value};
}

inline DomainMoments domain_moments(const ProblemData& I, const Frequency2D& a, std::size_t nodes) {
  return {vector_moment(I.u0, a, nodes), vector_moment(I.u0star, a, nodes), vector_moment(I.uT, a, nodes)};
}

}  // namespace spectral_detail

// ---------------------------------------------------------------------------
// Direct evaluation from ProblemData

struct Dispersion {
  double d1 = 0.0;
  double d2 = 0.0;
  double d = 0.0;
};

inline Dispersion eval_dispersion(const ProblemData& I, const Frequency2D& alpha, const QuadratureOptions& opts = {}) {
  const double r = alpha.norm();
  if (!std::isfinite(r)) throw InvalidInput("eval_dispersion: non-finite frequency");
  const auto& k = I.constants;
  Dispersion out;
  out.d1 = sine_moment(I.phi, k.p_speed() * r, k.T, opts.time_nodes);
  out.d2 = sine_moment(I.phi, k.s_speed() * r, k.T, opts.time_nodes);
  out.d = out.d1 * out.d2;
  return out;
}

inline double eval_h0(const ProblemData& I, const Frequency2D& alpha, const QuadratureOptions& opts = {}) {
  spectral_detail::require_nonzero(alpha, "eval_h0");
  const auto& k = I.constants;
  const auto m = spectral_detail::domain_moments(I, alpha, opts.space_nodes);
  const double b0 =
      boundary_spacetime_moment(I.X, k.p_speed() * alpha.norm(), TractionKernel::alpha_dot(), alpha, k.T, opts);
  return spectral_detail::h0_from(k, alpha, m, b0);
}

inline double eval_hj(const ProblemData& I, const Frequency2D& alpha, int j, const QuadratureOptions& opts = {}) {
  spectral_detail::require_nonzero(alpha, "eval_hj");
  if (j != 1 && j != 2) throw InvalidInput("eval_hj: component index must be 1 or 2");
  const auto& k = I.constants;
  const auto m = spectral_detail::domain_moments(I, alpha, opts.space_nodes);
  const double bj =
      boundary_spacetime_moment(I.X, k.s_speed() * alpha.norm(), TractionKernel::transverse(j), alpha, k.T, opts);
  return spectral_detail::hj_from(k, alpha, m, bj, j);
}

inline double eval_gj(const ProblemData& I, const Frequency2D& alpha, int j, const QuadratureOptions& opts = {}) {
  spectral_detail::require_nonzero(alpha, "eval_gj");
  if (j != 1 && j != 2) throw InvalidInput("eval_gj: component index must be 1 or 2");
  const auto disp = eval_dispersion(I, alpha, opts);
  return spectral_detail::gj_from(alpha, disp.d1, disp.d2, eval_h0(I, alpha, opts), eval_hj(I, alpha, j, opts), j);
}

// ---------------------------------------------------------------------------
// Quadrature-backed source

/// Wraps ProblemData; analytic members are sampled once at construction.
class QuadratureSource : public SpectralSource {
 public:
  explicit QuadratureSource(const ProblemData& I, QuadratureOptions opts = {}, std::string label = "quadrature")
      : constants_(I.constants), opts_(opts), label_(std::move(label)), phi_(I.phi.resampled(opts.time_nodes)),
        X_(prepare_boundary(I.X, opts)) {
    require_simpson_count(opts.space_nodes, "quadrature source (space)");
    require_simpson_count(opts.time_nodes, "quadrature source (time)");
    const VectorField2D* fields[3] = {&I.u0, &I.u0star, &I.uT};
    for (std::size_t f = 0; f < 3; ++f)
      for (int c = 1; c <= 2; ++c) {
        const auto& w = fields[f]->component(c);
        auto& slot = fields_[f][static_cast<std::size_t>(c - 1)];
        if (w.is_zero()) continue;
        slot = w.is_sampled() ? w : w.sampled_on(GridSpec(opts.space_nodes));
      }
  }

  const ElasticConstants& constants() const { return constants_; }
  const QuadratureOptions& options() const { return opts_; }

  std::string describe() const override { return label_; }

  SpectralSample sample(const Frequency2D& a) const override {
    spectral_detail::require_nonzero(a, "quadrature source");
    const auto& k = constants_;
    const double r = a.norm();
    const double d1 = sine_moment(phi_, k.p_speed() * r, k.T);
    const double d2 = sine_moment(phi_, k.s_speed() * r, k.T);
    spectral_detail::DomainMoments m;
    spectral_detail::Pair* slots[3] = {&m.u0, &m.u0star, &m.uT};
    for (std::size_t f = 0; f < 3; ++f)
      for (std::size_t c = 0; c < 2; ++c)
        if (const auto& w = fields_[f][c]) (*slots[f])[c] = quad_detail::tensor_cosine(w->grid(), w->values(), a.alpha1, a.alpha2);
    spectral_detail::BoundaryTerms b;
    if (!X_.is_zero()) {
      const auto prof = boundary_cosine_profile(X_, a, opts_);
      b.b0 = profile_time_moment(prof, k.p_speed() * r, TractionKernel::alpha_dot(), a);
      b.b[0] = profile_time_moment(prof, k.s_speed() * r, TractionKernel::transverse(1), a);
      b.b[1] = profile_time_moment(prof, k.s_speed() * r, TractionKernel::transverse(2), a);
    }
    return spectral_detail::assemble(k, a, d1, d2, m, b);
  }

  LatticeSamples sample_lattice(const FrequencyLattice& L) const override;

 private:
  static BoundaryTrace prepare_boundary(const BoundaryTrace& X, const QuadratureOptions& opts) {
    if (X.is_zero()) return X;
    auto [ns, nt] = quad_detail::sampled_shape(X);
    if (nt == 0) {
      ns = opts.space_nodes;
      nt = opts.time_nodes;
    }
    return sample_boundary(X, ns, nt);
  }

  ElasticConstants constants_;
  QuadratureOptions opts_;
  std::string label_;
  TimeSignal phi_;
  BoundaryTrace X_;
  std::array<std::array<std::optional<ScalarField2D>, 2>, 3> fields_;  // u0, u0*, uT
};

namespace spectral_detail {

// Row-major (rows × cols) dense matrix.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;
  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
  double* row(std::size_t i) { return v.data() + i * cols; }
  const double* row(std::size_t i) const { return v.data() + i * cols; }
  std::span<const double> span_row(std::size_t i) const { return {row(i), cols}; }
};

// out[p][m] = w[m]·cos(axis[p]·x_m) (or sin), x_m = m·h.
inline Matrix weighted_trig(const std::vector<double>& axis, std::size_t nodes, double h, bool sine) {
  const auto w = simpson_weights(nodes, h);
  Matrix M(axis.size(), nodes);
  for (std::size_t p = 0; p < axis.size(); ++p)
    for (std::size_t m = 0; m < nodes; ++m) {
      const double arg = axis[p] * static_cast<double>(m) * h;
      M.row(p)[m] = w[m] * (sine ? std::sin(arg) : std::cos(arg));
    }
  return M;
}

// All lattice cosine moments of one sampled field: M[q][p] = ∫ w cos(a_p x1 + a_q x2).
inline Matrix lattice_moments(const ScalarField2D& w, const std::vector<double>& axis) {
  const auto& g = w.grid();
  const auto vals = w.values();
  const std::size_t n = axis.size(), nx = g.nx(), ny = g.ny();
  const Matrix Cx = weighted_trig(axis, nx, g.hx(), false), Sx = weighted_trig(axis, nx, g.hx(), true);
  const Matrix Cy = weighted_trig(axis, ny, g.hy(), false), Sy = weighted_trig(axis, ny, g.hy(), true);
  // Rc[p][i] = Σ_j Cx[p][j] v[i][j]
  Matrix Rc(n, ny), Rs(n, ny);
  parallel_for(n, [&](std::size_t p) {
    for (std::size_t i = 0; i < ny; ++i) {
      const auto row = vals.subspan(i * nx, nx);
      Rc.row(p)[i] = compensated_dot(row, Cx.span_row(p));
      Rs.row(p)[i] = compensated_dot(row, Sx.span_row(p));
    }
  });
  Matrix M(n, n);
  parallel_for(n, [&](std::size_t q) {
    for (std::size_t p = 0; p < n; ++p)
      M.row(q)[p] = compensated_dot(Rc.span_row(p), Cy.span_row(q)) - compensated_dot(Rs.span_row(p), Sy.span_row(q));
  });
  return M;
}

// Edge profiles of one sampled edge trace against cos/sin(a·s):
// out[p][k] = Σ_m ws_m trig(a_p s_m) V[k][m].
inline Matrix edge_profile(const EdgeTrace& tr, const std::vector<double>& axis, bool sine) {
  const std::size_t ns = tr.ns(), nt = tr.nt(), n = axis.size();
  const Matrix K = weighted_trig(axis, ns, 1.0 / static_cast<double>(ns - 1), sine);
  const auto vals = tr.values();
  Matrix out(n, nt);
  parallel_for(n, [&](std::size_t p) {
    for (std::size_t k = 0; k < nt; ++k) out.row(p)[k] = compensated_dot(vals.subspan(k * ns, ns), K.span_row(p));
  });
  return out;
}

}  // namespace spectral_detail

inline LatticeSamples QuadratureSource::sample_lattice(const FrequencyLattice& L) const {
  using spectral_detail::Matrix;
  LatticeSamples out = empty_lattice(L);
  const std::size_t n = L.size();
  const auto& axis = L.axis;
  const auto& k = constants_;

  // Domain moments.
  std::array<std::array<std::optional<Matrix>, 2>, 3> mom;
  for (std::size_t f = 0; f < 3; ++f)
    for (std::size_t c = 0; c < 2; ++c)
      if (fields_[f][c]) mom[f][c] = spectral_detail::lattice_moments(*fields_[f][c], axis);

  // Boundary cosine profiles, per component: bottom/top depend on a_p, right/left on a_q.
  struct EdgeSet {
    std::optional<Matrix> bottom, right_c, right_s, top_c, top_s, left;
  };
  std::array<EdgeSet, 2> edges;
  std::size_t nt = 0;
  if (!X_.is_zero()) {
    for (int c = 1; c <= 2; ++c) {
      auto& es = edges[static_cast<std::size_t>(c - 1)];
      const auto& b = X_.component(Edge::Bottom, c);
      const auto& r = X_.component(Edge::Right, c);
      const auto& t = X_.component(Edge::Top, c);
      const auto& l = X_.component(Edge::Left, c);
      if (!b.is_zero()) es.bottom = spectral_detail::edge_profile(b, axis, false);
      if (!r.is_zero()) {
        es.right_c = spectral_detail::edge_profile(r, axis, false);
        es.right_s = spectral_detail::edge_profile(r, axis, true);
      }
      if (!t.is_zero()) {
        es.top_c = spectral_detail::edge_profile(t, axis, false);
        es.top_s = spectral_detail::edge_profile(t, axis, true);
      }
      if (!l.is_zero()) es.left = spectral_detail::edge_profile(l, axis, false);
    }
    nt = quad_detail::sampled_shape(X_).second;
  }

  // Dispersion depends on |α| only; evaluate once per distinct radius.
  std::vector<double> radii2;
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p)
      if (out.inside[q * n + p]) radii2.push_back(axis[p] * axis[p] + axis[q] * axis[q]);
  std::sort(radii2.begin(), radii2.end());
  radii2.erase(std::unique(radii2.begin(), radii2.end()), radii2.end());
  std::vector<std::array<double, 2>> disp(radii2.size());
  parallel_for(radii2.size(), [&](std::size_t i) {
    const double r = std::sqrt(radii2[i]);
    disp[i] = {sine_moment(phi_, k.p_speed() * r, k.T), sine_moment(phi_, k.s_speed() * r, k.T)};
  });

  std::vector<double> wt;
  if (nt) wt = simpson_weights(nt, k.T / static_cast<double>(nt - 1));

  parallel_for(n, [&](std::size_t q) {
    std::vector<double> prof(nt), sin1(nt), sin2(nt);
    const double cq = std::cos(axis[q]), sq = std::sin(axis[q]);
    for (std::size_t p = 0; p < n; ++p) {
      if (!out.inside[q * n + p]) continue;
      const Frequency2D a{axis[p], axis[q]};
      const double r2 = axis[p] * axis[p] + axis[q] * axis[q];
      const auto& dd = disp[static_cast<std::size_t>(std::lower_bound(radii2.begin(), radii2.end(), r2) - radii2.begin())];

      spectral_detail::DomainMoments m;
      spectral_detail::Pair* slots[3] = {&m.u0, &m.u0star, &m.uT};
      for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t c = 0; c < 2; ++c)
          if (mom[f][c]) (*slots[f])[c] = mom[f][c]->row(q)[p];

      spectral_detail::BoundaryTerms bt;
      if (nt) {
        const double r = std::sqrt(r2);
        const double w1 = k.p_speed() * r, w2 = k.s_speed() * r;
        const double dt = k.T / static_cast<double>(nt - 1);
        for (std::size_t t = 0; t < nt; ++t) {
          const double tau = k.T - static_cast<double>(t) * dt;
          sin1[t] = wt[t] * std::sin(w1 * tau);
          sin2[t] = wt[t] * std::sin(w2 * tau);
        }
        const double cp = std::cos(axis[p]), sp = std::sin(axis[p]);
        std::array<std::array<double, 2>, 2> Q{};  // Q[c][speed]
        for (std::size_t c = 0; c < 2; ++c) {
          const auto& es = edges[c];
          bool any = false;
          for (std::size_t t = 0; t < nt; ++t) {
            CompensatedSum acc;
            if (es.bottom) acc.add(es.bottom->row(p)[t]);
            if (es.right_c) acc.add(cp * es.right_c->row(q)[t] - sp * es.right_s->row(q)[t]);
            if (es.top_c) acc.add(es.top_c->row(p)[t] * cq - es.top_s->row(p)[t] * sq);
            if (es.left) acc.add(es.left->row(q)[t]);
            prof[t] = acc.value();
          }
          any = es.bottom || es.right_c || es.top_c || es.left;
          if (!any) continue;
          Q[c][0] = compensated_dot(prof, sin1);
          Q[c][1] = compensated_dot(prof, sin2);
        }
        // Kernels are linear in X, so they commute with the time integral.
        bt.b0 = a.alpha1 * Q[0][0] + a.alpha2 * Q[1][0];
        const double dot2 = a.alpha1 * Q[0][1] + a.alpha2 * Q[1][1];
        bt.b[0] = r2 * Q[0][1] - a.alpha1 * dot2;
        bt.b[1] = r2 * Q[1][1] - a.alpha2 * dot2;
      }
      out.data[q * n + p] = spectral_detail::assemble(k, a, dd[0], dd[1], m, bt);
    }
  });
  return out;
}

// ---------------------------------------------------------------------------
// Memoization

/// Caches samples per α; each entry is written once and then only read.
class MemoizedSource : public SpectralSource {
 public:
  explicit MemoizedSource(std::shared_ptr<const SpectralSource> inner) : inner_(std::move(inner)) {
    if (!inner_) throw InvalidInput("memoized source: null inner source");
  }

  std::string describe() const override { return inner_->describe(); }

  SpectralSample sample(const Frequency2D& a) const override {
    const Key key{bits(a.alpha1), bits(a.alpha2)};
    {
      std::shared_lock lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    SpectralSample s = inner_->sample(a);
    std::unique_lock lock(mutex_);
    // First writer wins; later writers computed the identical value.
    return cache_.emplace(key, s).first->second;
  }

  LatticeSamples sample_lattice(const FrequencyLattice& L) const override {
    LatticeSamples out = inner_->sample_lattice(L);
    std::unique_lock lock(mutex_);
    for (std::size_t i = 0; i < out.data.size(); ++i)
      if (out.inside[i]) {
        const auto& s = out.data[i];
        out.data[i] = cache_.emplace(Key{bits(s.alpha.alpha1), bits(s.alpha.alpha2)}, s).first->second;
      }
    return out;
  }

  std::size_t cached() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
  }

 private:
  using Key = std::pair<std::uint64_t, std::uint64_t>;
  static std::uint64_t bits(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
  }

  std::shared_ptr<const SpectralSource> inner_;
  mutable std::shared_mutex mutex_;
  mutable std::map<Key, SpectralSample> cache_;
};

}  // namespace bodyforce

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/simpson.hpp"
#include "bodyforce/summation.hpp"

namespace bodyforce {

/// Lamé constants and the observation horizon T.
struct ElasticConstants {
  double lambda = 0.0;
  double mu = 1.0;
  double T = 1.0;

  void validate() const {
    if (!(mu > 0.0)) throw InvalidInput("elastic constants: mu must be > 0");
    if (!(lambda + 2.0 * mu > 0.0)) throw InvalidInput("elastic constants: lambda + 2 mu must be > 0");
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("elastic constants: T must be finite and > 0");
  }

  // Pressure and shear wave speeds sqrt(lambda + 2 mu) and sqrt(mu).
  double p_speed() const { return std::sqrt(lambda + 2.0 * mu); }
  double s_speed() const { return std::sqrt(mu); }
};

/// Uniform node grid on the closed unit square, x1 along columns, x2 along rows.
class GridSpec {
 public:
  GridSpec(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny) {
    if (nx < 3 || ny < 3 || nx % 2 == 0 || ny % 2 == 0)
      throw InvalidInput("grid: node counts must be odd and >= 3, got " + std::to_string(nx) + "x" +
                         std::to_string(ny));
  }
  explicit GridSpec(std::size_t n) : GridSpec(n, n) {}

  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  std::size_t size() const { return nx_ * ny_; }
  double hx() const { return 1.0 / static_cast<double>(nx_ - 1); }
  double hy() const { return 1.0 / static_cast<double>(ny_ - 1); }
  double x(std::size_t j) const { return static_cast<double>(j) * hx(); }
  double y(std::size_t i) const { return static_cast<double>(i) * hy(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * nx_ + j; }

  bool operator==(const GridSpec&) const = default;

 private:
  std::size_t nx_;
  std::size_t ny_;
};

/// True when a uniform grid with `nodes` nodes on [0,1] puts at least four
/// nodes in every period of angular frequency `omega`.
inline bool resolves_frequency(std::size_t nodes, double omega) {
  if (nodes < 2) return false;
  if (omega == 0.0) return true;
  const double h = 1.0 / static_cast<double>(nodes - 1);
  return 2.0 * std::numbers::pi / (std::abs(omega) * h) >= 4.0;
}

/// A function of time on [0,T]: odd-count uniform samples or an evaluable callable.
class TimeSignal {
 public:
  using Function = std::function<double(double)>;

  static TimeSignal sampled(std::vector<double> values, double T) {
    require_simpson_count(values.size(), "time signal");
    check_horizon(T);
    TimeSignal s;
    s.T_ = T;
    s.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    return s;
  }

  static TimeSignal analytic(Function f, double T) {
    check_horizon(T);
    TimeSignal s;
    s.T_ = T;
    s.fn_ = std::make_shared<const Function>(std::move(f));
    return s;
  }

  double T() const { return T_; }
  bool is_sampled() const { return values_ != nullptr; }
  std::span<const double> samples() const {
    if (!values_) throw InvalidInput("time signal: samples requested from an analytic signal");
    return *values_;
  }
  std::size_t node_count() const { return values_ ? values_->size() : 0; }

  double operator()(double t) const {
    if (!fn_) throw InvalidInput("time signal: pointwise evaluation of a sampled signal");
    return (*fn_)(t);
  }

  /// Samples at `nt` uniform nodes (analytic) or returns *this if already sampled.
  TimeSignal resampled(std::size_t nt) const {
    if (values_) return *this;
    require_simpson_count(nt, "time signal");
    std::vector<double> v(nt);
    const double dt = T_ / static_cast<double>(nt - 1);
    for (std::size_t k = 0; k < nt; ++k) v[k] = (*fn_)(static_cast<double>(k) * dt);
    return sampled(std::move(v), T_);
  }

 private:
  TimeSignal() = default;
  static void check_horizon(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("time signal: T must be finite and > 0");
  }

  double T_ = 1.0;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const Function> fn_;
};

/// Scalar function on the unit square, either grid samples or a callable.
class ScalarField2D {
 public:
  using Function = std::function<double(double, double)>;

  static ScalarField2D sampled(const GridSpec& grid, std::vector<double> values) {
    if (values.size() != grid.size())
      throw InvalidInput("scalar field: " + std::to_string(values.size()) + " samples for a " +
                         std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()) + " grid");
    ScalarField2D f;
    f.grid_ = grid;
    f.zero_ = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    f.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    return f;
  }

  static ScalarField2D analytic(Function fn) {
    ScalarField2D f;
    f.fn_ = std::make_shared<const Function>(std::move(fn));
    return f;
  }

  static ScalarField2D zero() {
    ScalarField2D f = analytic([](double, double) { return 0.0; });
    f.zero_ = true;
    return f;
  }

  bool is_sampled() const { return values_ != nullptr; }
  bool is_zero() const { return zero_; }

  const GridSpec& grid() const {
    if (!grid_) throw InvalidInput("scalar field: grid requested from an analytic field");
    return *grid_;
  }
  std::span<const double> values() const {
    if (!values_) throw InvalidInput("scalar field: samples requested from an analytic field");
    return *values_;
  }
  double at(std::size_t i, std::size_t j) const { return values()[grid().index(i, j)]; }

  double operator()(double x1, double x2) const {
    if (!fn_) throw InvalidInput("scalar field: pointwise evaluation of a sampled field");
    return (*fn_)(x1, x2);
  }

  /// Samples an analytic field on `grid`; a sampled field must already live on it.
  ScalarField2D sampled_on(const GridSpec& grid) const {
    if (values_) {
      if (!(*grid_ == grid)) throw InvalidInput("scalar field: cannot resample a sampled field");
      return *this;
    }
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.ny(); ++i)
      for (std::size_t j = 0; j < grid.nx(); ++j) v[grid.index(i, j)] = (*fn_)(grid.x(j), grid.y(i));
    return sampled(grid, std::move(v));
  }

 private:
  ScalarField2D() = default;

  std::optional<GridSpec> grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const Function> fn_;
  bool zero_ = false;
};

/// Two scalar components; sampled components must share one grid.
class VectorField2D {
 public:
  VectorField2D(ScalarField2D first, ScalarField2D second) : parts_{std::move(first), std::move(second)} {
    if (parts_[0].is_sampled() != parts_[1].is_sampled())
      throw InvalidInput("vector field: components mix sampled and analytic representations");
    if (parts_[0].is_sampled() && !(parts_[0].grid() == parts_[1].grid()))
      throw InvalidInput("vector field: component grids differ");
  }

  static VectorField2D zero() { return {ScalarField2D::zero(), ScalarField2D::zero()}; }

  // j in {1, 2}
  const ScalarField2D& component(int j) const {
    if (j != 1 && j != 2) throw InvalidInput("vector field: component index must be 1 or 2");
    return parts_[static_cast<std::size_t>(j - 1)];
  }
  bool is_zero() const { return parts_[0].is_zero() && parts_[1].is_zero(); }

 private:
  std::array<ScalarField2D, 2> parts_;
};

// ---------------------------------------------------------------------------
// Boundary

enum class Edge { Bottom, Right, Top, Left };

inline constexpr std::array<Edge, 4> kEdges{Edge::Bottom, Edge::Right, Edge::Top, Edge::Left};

inline std::string_view edge_name(Edge e) {
  switch (e) {
    case Edge::Bottom: return "bottom";
    case Edge::Right: return "right";
    case Edge::Top: return "top";
    case Edge::Left: return "left";
  }
  return "?";
}

inline std::optional<Edge> parse_edge(std::string_view name) {
  for (Edge e : kEdges)
    if (edge_name(e) == name) return e;
  return std::nullopt;
}

// The arc parameter s is the coordinate that varies along the edge:
// x1 on bottom/top, x2 on right/left.
inline std::array<double, 2> edge_point(Edge e, double s) {
  switch (e) {
    case Edge::Bottom: return {s, 0.0};
    case Edge::Right: return {1.0, s};
    case Edge::Top: return {s, 1.0};
    case Edge::Left: return {0.0, s};
  }
  return {0.0, 0.0};
}

inline std::array<double, 2> outward_normal(Edge e) {
  switch (e) {
    case Edge::Bottom: return {0.0, -1.0};
    case Edge::Right: return {1.0, 0.0};
    case Edge::Top: return {0.0, 1.0};
    case Edge::Left: return {-1.0, 0.0};
  }
  return {0.0, 0.0};
}

/// One traction component on one edge as a function of (s, t) in [0,1] x [0,T].
/// Sampled values are stored row-major with rows indexed by time.
class EdgeTrace {
 public:
  using Function = std::function<double(double s, double t)>;

  static EdgeTrace sampled(std::size_t ns, std::size_t nt, double T, std::vector<double> values) {
    require_simpson_count(ns, "edge trace (space)");
    require_simpson_count(nt, "edge trace (time)");
    if (values.size() != ns * nt)
      throw InvalidInput("edge trace: " + std::to_string(values.size()) + " samples for " + std::to_string(ns) +
                         "x" + std::to_string(nt));
    check_horizon(T);
    EdgeTrace e;
    e.ns_ = ns;
    e.nt_ = nt;
    e.T_ = T;
    e.zero_ = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    e.values_ = std::make_shared<const std::vector<double>>(std::move(values));
    return e;
  }

  static EdgeTrace analytic(Function fn, double T) {
    check_horizon(T);
    EdgeTrace e;
    e.T_ = T;
    e.fn_ = std::make_shared<const Function>(std::move(fn));
    return e;
  }

  static EdgeTrace zero(double T) {
    EdgeTrace e = analytic([](double, double) { return 0.0; }, T);
    e.zero_ = true;
    return e;
  }

  double T() const { return T_; }
  bool is_sampled() const { return values_ != nullptr; }
  bool is_zero() const { return zero_; }
  std::size_t ns() const { return ns_; }
  std::size_t nt() const { return nt_; }
  std::span<const double> values() const {
    if (!values_) throw InvalidInput("edge trace: samples requested from an analytic trace");
    return *values_;
  }
  double operator()(double s, double t) const {
    if (!fn_) throw InvalidInput("edge trace: pointwise evaluation of a sampled trace");
    return (*fn_)(s, t);
  }

  EdgeTrace sampled_on(std::size_t ns, std::size_t nt) const {
    if (values_) {
      if (ns != ns_ || nt != nt_) throw InvalidInput("edge trace: cannot resample a sampled trace");
      return *this;
    }
    require_simpson_count(ns, "edge trace (space)");
    require_simpson_count(nt, "edge trace (time)");
    std::vector<double> v(ns * nt);
    const double ds = 1.0 / static_cast<double>(ns - 1);
    const double dt = T_ / static_cast<double>(nt - 1);
    for (std::size_t k = 0; k < nt; ++k)
      for (std::size_t m = 0; m < ns; ++m)
        v[k * ns + m] = (*fn_)(static_cast<double>(m) * ds, static_cast<double>(k) * dt);
    return sampled(ns, nt, T_, std::move(v));
  }

 private:
  EdgeTrace() = default;
  static void check_horizon(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("edge trace: T must be finite and > 0");
  }

  std::size_t ns_ = 0;
  std::size_t nt_ = 0;
  double T_ = 1.0;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const Function> fn_;
  bool zero_ = false;
};

/// Surface traction X = (X1, X2) on the four edges of the square.
class BoundaryTrace {
 public:
  using EdgeComponents = std::array<EdgeTrace, 2>;
  // Point traction (X1, X2) given position, time and outward normal.
  using TractionFunction =
      std::function<std::array<double, 2>(double x1, double x2, double t, const std::array<double, 2>& n)>;

  BoundaryTrace(double T, std::array<EdgeComponents, 4> parts) : T_(T), parts_(std::move(parts)) {
    for (const auto& edge : parts_)
      for (const auto& c : edge)
        if (c.T() != T_) throw InvalidInput("boundary trace: edge time horizon differs from T");
  }

  static BoundaryTrace zero(double T) {
    const EdgeComponents z{EdgeTrace::zero(T), EdgeTrace::zero(T)};
    return BoundaryTrace(T, {z, z, z, z});
  }

  static BoundaryTrace from_traction(TractionFunction traction, double T) {
    auto shared = std::make_shared<const TractionFunction>(std::move(traction));
    std::array<EdgeComponents, 4> parts{EdgeComponents{EdgeTrace::zero(T), EdgeTrace::zero(T)},
                                        EdgeComponents{EdgeTrace::zero(T), EdgeTrace::zero(T)},
                                        EdgeComponents{EdgeTrace::zero(T), EdgeTrace::zero(T)},
                                        EdgeComponents{EdgeTrace::zero(T), EdgeTrace::zero(T)}};
    for (Edge e : kEdges) {
      for (std::size_t c = 0; c < 2; ++c) {
        parts[static_cast<std::size_t>(e)][c] = EdgeTrace::analytic(
            [shared, e, c](double s, double t) {
              const auto x = edge_point(e, s);
              return (*shared)(x[0], x[1], t, outward_normal(e))[c];
            },
            T);
      }
    }
    return BoundaryTrace(T, std::move(parts));
  }

  double T() const { return T_; }

  // c in {1, 2}
  const EdgeTrace& component(Edge e, int c) const {
    if (c != 1 && c != 2) throw InvalidInput("boundary trace: component index must be 1 or 2");
    return parts_[static_cast<std::size_t>(e)][static_cast<std::size_t>(c - 1)];
  }

  bool is_zero() const {
    for (const auto& edge : parts_)
      for (const auto& c : edge)
        if (!c.is_zero()) return false;
    return true;
  }

 private:
  double T_;
  std::array<EdgeComponents, 4> parts_;
};

/// The measurement tuple (phi, X, u0, u0*, uT) with its elastic constants.
struct ProblemData {
  ProblemData(ElasticConstants constants_, TimeSignal phi_, BoundaryTrace X_, VectorField2D u0_,
              VectorField2D u0star_, VectorField2D uT_)
      : constants(constants_),
        phi(std::move(phi_)),
        X(std::move(X_)),
        u0(std::move(u0_)),
        u0star(std::move(u0star_)),
        uT(std::move(uT_)) {
    constants.validate();
    if (phi.T() != constants.T) throw InvalidInput("problem data: phi horizon differs from T");
    if (X.T() != constants.T) throw InvalidInput("problem data: traction horizon differs from T");
  }

  ElasticConstants constants;
  TimeSignal phi;
  BoundaryTrace X;
  VectorField2D u0;
  VectorField2D u0star;
  VectorField2D uT;
};

// ---------------------------------------------------------------------------
// Norms

namespace detail {

inline const ScalarField2D& require_sampled(const ScalarField2D& w, const char* op) {
  if (!w.is_sampled()) throw InvalidInput(std::string(op) + ": field must be sampled");
  return w;
}

// Tensor Simpson of g(values) over the grid.
template <class F>
double grid_simpson(const GridSpec& g, F&& integrand_at) {
  const auto wx = simpson_weights(g.nx(), g.hx());
  const auto wy = simpson_weights(g.ny(), g.hy());
  CompensatedSum total;
  for (std::size_t i = 0; i < g.ny(); ++i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < g.nx(); ++j) row.add(wx[j] * integrand_at(i, j));
    total.add(wy[i] * row.value());
  }
  return total.value();
}

}  // namespace detail

/// Composite-Simpson L2(Omega) norm of a sampled field.
inline double l2_norm(const ScalarField2D& w) {
  const auto& f = detail::require_sampled(w, "l2_norm");
  const auto& g = f.grid();
  const auto v = f.values();
  const double sq = detail::grid_simpson(g, [&](std::size_t i, std::size_t j) {
    const double x = v[g.index(i, j)];
    return x * x;
  });
  return std::sqrt(std::max(0.0, sq));
}

/// Composite-Simpson integral of a sampled field over Omega.
inline double integral(const ScalarField2D& w) {
  const auto& f = detail::require_sampled(w, "integral");
  const auto& g = f.grid();
  const auto v = f.values();
  return detail::grid_simpson(g, [&](std::size_t i, std::size_t j) { return v[g.index(i, j)]; });
}

/// Maximum absolute sample value.
inline double linf_norm(const ScalarField2D& w) {
  const auto v = detail::require_sampled(w, "linf_norm").values();
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

/// H1(Omega) norm; gradients by second-order central differences inside and
/// second-order one-sided differences on the edges.
inline double h1_norm(const ScalarField2D& w) {
  const auto& f = detail::require_sampled(w, "h1_norm");
  const auto& g = f.grid();
  const auto v = f.values();
  const double hx = g.hx(), hy = g.hy();
  const std::size_t nx = g.nx(), ny = g.ny();
  auto at = [&](std::size_t i, std::size_t j) { return v[g.index(i, j)]; };
  auto dx = [&](std::size_t i, std::size_t j) {
    if (j == 0) return (-3.0 * at(i, 0) + 4.0 * at(i, 1) - at(i, 2)) / (2.0 * hx);
    if (j + 1 == nx) return (3.0 * at(i, nx - 1) - 4.0 * at(i, nx - 2) + at(i, nx - 3)) / (2.0 * hx);
    return (at(i, j + 1) - at(i, j - 1)) / (2.0 * hx);
  };
  auto dy = [&](std::size_t i, std::size_t j) {
    if (i == 0) return (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2.0 * hy);
    if (i + 1 == ny) return (3.0 * at(ny - 1, j) - 4.0 * at(ny - 2, j) + at(ny - 3, j)) / (2.0 * hy);
    return (at(i + 1, j) - at(i - 1, j)) / (2.0 * hy);
  };
  const double sq = detail::grid_simpson(g, [&](std::size_t i, std::size_t j) {
    const double a = at(i, j), b = dx(i, j), c = dy(i, j);
    return a * a + b * b + c * c;
  });
  return std::sqrt(std::max(0.0, sq));
}

/// Pointwise a - b for two fields sampled on the same grid.
inline ScalarField2D difference(const ScalarField2D& a, const ScalarField2D& b) {
  detail::require_sampled(a, "difference");
  detail::require_sampled(b, "difference");
  if (!(a.grid() == b.grid())) throw InvalidInput("difference: grids differ");
  const auto va = a.values(), vb = b.values();
  std::vector<double> out(va.size());
  for (std::size_t k = 0; k < va.size(); ++k) out[k] = va[k] - vb[k];
  return ScalarField2D::sampled(a.grid(), std::move(out));
}

}  // namespace bodyforce

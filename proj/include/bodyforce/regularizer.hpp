#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/parallel.hpp"
#include "bodyforce/quadrature.hpp"
#include "bodyforce/spectral.hpp"
#include "bodyforce/summation.hpp"

namespace bodyforce {

enum class RegMode { TheoremRate, Practical };

inline std::string_view mode_name(RegMode m) { return m == RegMode::Practical ? "practical" : "theorem"; }

inline std::optional<RegMode> parse_mode(std::string_view s) {
  if (s == "practical") return RegMode::Practical;
  if (s == "theorem") return RegMode::TheoremRate;
  return std::nullopt;
}

/// Practical radius for ε ≥ 1e-8, theorem radius below.
inline RegMode default_mode(double epsilon) { return epsilon >= 1e-8 ? RegMode::Practical : RegMode::TheoremRate; }

struct RegParams {
  double epsilon = 0.0;
  double q = 1.0 / 7.0;
  double delta = 0.0;
  double R = 0.0;
  RegMode mode = RegMode::Practical;
  // Theorem mode only: the radius with ε in place of e in the 9eT factor.
  std::optional<double> R_alt_9epsT;
};

inline RegParams select_params(double epsilon, double T, RegMode mode) {
  if (!(T > 0.0) || !std::isfinite(T)) throw InvalidInput("select_params: T must be finite and > 0");
  RegParams p;
  p.epsilon = epsilon;
  p.mode = mode;
  p.q = 1.0 / 7.0;
  if (mode == RegMode::Practical) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw InvalidInput("select_params: practical mode requires 0 < epsilon < 1");
    p.R = 10.0 * std::pow(std::log(1.0 / epsilon), 0.9);
  } else {
    if (!(epsilon > 0.0 && epsilon < std::exp(-std::numbers::e)))
      throw InvalidInput("select_params: theorem mode requires 0 < epsilon < exp(-e), so that ln(ln(1/epsilon)) > 1");
    const double L = std::log(1.0 / epsilon);
    const double rate = L / std::log(L);
    p.R = p.q / (9.0 * std::numbers::e * T) * rate;
    p.R_alt_9epsT = p.q / (9.0 * epsilon * T) * rate;
  }
  p.delta = std::pow(epsilon, (1.0 + 6.0 * p.q) / 2.0);
  return p;
}

inline RegParams select_params(double epsilon, double T) { return select_params(epsilon, T, default_mode(epsilon)); }

/// χ(|α| < R)·g_j·d/(δ + d²) for an already evaluated sample.
inline double multiplier_from(const SpectralSample& s, int j, const RegParams& params) {
  if (j != 1 && j != 2) throw InvalidInput("multiplier: component index must be 1 or 2");
  if (!(s.alpha.norm() < params.R)) return 0.0;
  const double G = s.g[static_cast<std::size_t>(j - 1)] * s.d / (params.delta + s.d * s.d);
  if (!std::isfinite(G))
    throw NumericError("non-finite multiplier at alpha = (" + std::to_string(s.alpha.alpha1) + ", " +
                       std::to_string(s.alpha.alpha2) + ")");
  return G;
}

inline double eval_multiplier(const SpectralSource& src, const Frequency2D& alpha, int j, const RegParams& params) {
  if (alpha.norm() == 0.0) throw InvalidInput("eval_multiplier: alpha = 0 is excluded");
  if (!(alpha.norm() < params.R)) return 0.0;
  return multiplier_from(src.sample(alpha), j, params);
}

struct ReconstructedSource {
  ScalarField2D f1;
  ScalarField2D f2;
  RegParams params;
  std::string provenance;
  double spacing = 0.0;
  std::size_t lattice_nodes = 0;  // nodes inside the disk
};

/// Multiplier values G_j on a lattice, row-major like LatticeSamples.
struct MultiplierGrid {
  FrequencyLattice lattice;
  std::array<std::vector<double>, 2> G;
  std::size_t inside = 0;
};

inline MultiplierGrid multipliers_on(const LatticeSamples& S, const RegParams& params) {
  MultiplierGrid M;
  M.lattice = S.lattice;
  const std::size_t n = S.n();
  for (auto& g : M.G) g.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n * n; ++i) {
    if (!S.inside[i]) continue;
    ++M.inside;
    M.G[0][i] = multiplier_from(S.data[i], 1, params);
    M.G[1][i] = multiplier_from(S.data[i], 2, params);
  }
  return M;
}

namespace reg_detail {

// f(ξ) = (Δ²/4π²) Σ_{p,q} G[q][p]·trig(a_p ξ1 + a_q ξ2) on every grid node, where
// trig is cos (or sin when `sine`). Rows of the output are independent.
inline std::vector<double> inverse_transform(const std::vector<double>& G, const FrequencyLattice& L,
                                             const GridSpec& grid, bool sine) {
  const std::size_t n = L.size(), nx = grid.nx(), ny = grid.ny();
  const auto& axis = L.axis;
  std::vector<double> cx(n * nx), sx(n * nx);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t j = 0; j < nx; ++j) {
      cx[p * nx + j] = std::cos(axis[p] * grid.x(j));
      sx[p * nx + j] = std::sin(axis[p] * grid.x(j));
    }
  const double scale = L.cell_area() / (4.0 * std::numbers::pi * std::numbers::pi);
  std::vector<double> out(grid.size());
  parallel_for(ny, [&](std::size_t i) {
    const double y = grid.y(i);
    std::vector<double> vc(n), vs(n), cy(n), sy(n);
    for (std::size_t q = 0; q < n; ++q) {
      cy[q] = std::cos(axis[q] * y);
      sy[q] = std::sin(axis[q] * y);
    }
    for (std::size_t p = 0; p < n; ++p) {
      CompensatedSum ac, as;
      for (std::size_t q = 0; q < n; ++q) {
        const double g = G[q * n + p];
        if (g == 0.0) continue;
        ac.add(g * cy[q]);
        as.add(g * sy[q]);
      }
      vc[p] = ac.value();
      vs[p] = as.value();
    }
    for (std::size_t j = 0; j < nx; ++j) {
      CompensatedSum acc;
      for (std::size_t p = 0; p < n; ++p) {
        const double c = cx[p * nx + j], s = sx[p * nx + j];
        // cos(a+b) = cos a cos b − sin a sin b;  sin(a+b) = sin a cos b + cos a sin b
        acc.add(sine ? s * vc[p] + c * vs[p] : c * vc[p] - s * vs[p]);
      }
      out[grid.index(i, j)] = scale * acc.value();
    }
  });
  for (double v : out)
    if (!std::isfinite(v)) throw NumericError("reconstruct: non-finite output value");
  return out;
}

}  // namespace reg_detail

/// Truncated, Tikhonov-damped inverse cosine transform on an output grid.
inline ReconstructedSource reconstruct(const SpectralSource& src, const RegParams& params, const GridSpec& out_grid,
                                       std::optional<double> spacing = std::nullopt) {
  if (!(params.R > 0.0) || !(params.delta > 0.0)) throw InvalidInput("reconstruct: invalid regularization parameters");
  const double d = spacing.value_or(FrequencyLattice::default_spacing(params.R));
  const auto L = FrequencyLattice::make(params.R, d);
  const auto S = src.sample_lattice(L);
  const auto M = multipliers_on(S, params);
  ReconstructedSource out{
      ScalarField2D::sampled(out_grid, reg_detail::inverse_transform(M.G[0], L, out_grid, false)),
      ScalarField2D::sampled(out_grid, reg_detail::inverse_transform(M.G[1], L, out_grid, false)),
      params,
      src.describe(),
      d,
      M.inside};
  return out;
}

/// The imaginary part of the complex-exponential form: (1/4π²)∫ G_j sin(α·ξ) dα on a grid.
inline ScalarField2D sine_kernel_transform(const MultiplierGrid& M, int j, const GridSpec& grid) {
  if (j != 1 && j != 2) throw InvalidInput("sine_kernel_transform: component index must be 1 or 2");
  return ScalarField2D::sampled(grid,
                                reg_detail::inverse_transform(M.G[static_cast<std::size_t>(j - 1)], M.lattice, grid, true));
}

/// Area of {α ∈ B(0,R): |d(α)| ≤ threshold} by node counting on a lattice of the given spacing.
inline double small_divisor_measure(const SpectralSource& src, const RegParams& params, double scan_spacing,
                                    double threshold) {
  if (!(scan_spacing > 0.0) || scan_spacing > 0.1)
    throw InvalidInput("small_divisor_measure: scan spacing must be in (0, 0.1]");
  if (!(threshold >= 0.0)) throw InvalidInput("small_divisor_measure: threshold must be >= 0");
  const auto S = src.sample_lattice(FrequencyLattice::make(params.R, scan_spacing));
  std::size_t count = 0;
  for (std::size_t i = 0; i < S.data.size(); ++i)
    if (S.inside[i] && std::abs(S.data[i].d) <= threshold) ++count;
  return static_cast<double>(count) * S.lattice.cell_area();
}

/// Default threshold ε^{2q}.
inline double small_divisor_measure(const SpectralSource& src, const RegParams& params, double scan_spacing) {
  return small_divisor_measure(src, params, scan_spacing, std::pow(params.epsilon, 2.0 * params.q));
}

/// Right-hand side of the squared-L² convergence-rate bound:
/// 63eT(66‖f‖²_{H¹} + (2π)⁻²)·ln(ln ε⁻¹)/ln ε⁻¹.
inline double rate_bound(double epsilon, double T, double h1_norm_fex) {
  if (!(epsilon > 0.0 && epsilon < std::exp(-1.0)))
    throw InvalidInput("rate_bound: requires 0 < epsilon < 1/e");
  const double L = std::log(1.0 / epsilon);
  const double c = 63.0 * std::numbers::e * T *
                   (66.0 * h1_norm_fex * h1_norm_fex + 1.0 / (4.0 * std::numbers::pi * std::numbers::pi));
  return c * std::log(L) / L;
}

}  // namespace bodyforce

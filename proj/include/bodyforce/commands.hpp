#pragma once

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/experiment.hpp"
#include "bodyforce/field_io.hpp"
#include "bodyforce/fields.hpp"
#include "bodyforce/quadrature.hpp"
#include "bodyforce/regularizer.hpp"
#include "bodyforce/spectral.hpp"

// The four CLI commands as library calls. Each returns a process exit code
// (0 ok, 2 invalid input, 3 numeric failure) and always writes manifest.txt.

namespace bodyforce::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumeric = 3;

/// Ordered `key = value` record of one run.
class RunManifest {
 public:
  explicit RunManifest(std::string command) { set("command", std::move(command)); }

  void set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
      if (kv.first == key) {
        kv.second = value;
        return;
      }
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }
  void set(const std::string& key, double value) { set(key, format_double(value)); }
  void set(const std::string& key, std::size_t value) { set(key, std::to_string(value)); }
  void set(const std::string& key, int value) { set(key, std::to_string(value)); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& kv : entries_)
      if (kv.first == key) return kv.second;
    return std::nullopt;
  }

  void write(const fs::path& path) const {
    std::ofstream out(path);
    for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  }

  static RunManifest read(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open manifest '" + path.string() + "'");
    RunManifest m("");
    m.entries_.clear();
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (line.empty() || line[0] == '#') continue;
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) throw ParseError(path.string(), no, "expected 'key = value'");
      m.entries_.emplace_back(line.substr(0, eq), line.substr(eq + 3));
    }
    return m;
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Runs `body`, recording status, error text and wall time into the manifest,
/// which is written to `manifest_path` whatever the outcome.
template <class Body>
int run_recorded(RunManifest& m, const fs::path& manifest_path, Body&& body, std::ostream& err = std::cerr) {
  const auto t0 = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    body();
    m.set("status", "ok");
  } catch (const InvalidInput& e) {
    code = kExitInvalid;
    m.set("status", "error");
    m.set("error", e.what());
    err << "error: " << e.what() << '\n';
  } catch (const NumericError& e) {
    code = kExitNumeric;
    m.set("status", "error");
    m.set("error", e.what());
    err << "numeric error: " << e.what() << '\n';
  } catch (const fs::filesystem_error& e) {
    code = kExitInvalid;
    m.set("status", "error");
    m.set("error", e.what());
    err << "error: " << e.what() << '\n';
  }
  m.set("exit_code", code);
  m.set("duration_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  try {
    if (!manifest_path.parent_path().empty()) fs::create_directories(manifest_path.parent_path());
    m.write(manifest_path);
  } catch (const std::exception& e) {
    err << "warning: could not write manifest: " << e.what() << '\n';
  }
  return code;
}

// ---------------------------------------------------------------------------
// Cases

/// `exact`, `perturbed:<n>`, or a directory written by synth.
struct CaseSpec {
  enum class Kind { Exact, Perturbed, Directory };
  Kind kind = Kind::Exact;
  int n = 0;
  fs::path dir;

  std::string label() const {
    switch (kind) {
      case Kind::Exact: return "exact";
      case Kind::Perturbed: return "perturbed:" + std::to_string(n);
      case Kind::Directory: return dir.string();
    }
    return "";
  }
};

inline int parse_positive_int(const std::string& s, const std::string& what) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v < 1)
    throw InvalidInput(what + ": expected a positive integer, got '" + s + "'");
  return v;
}

inline CaseSpec parse_case_name(const std::string& s) {
  CaseSpec c;
  if (s == "exact") return c;
  if (s.rfind("perturbed:", 0) == 0) {
    c.kind = CaseSpec::Kind::Perturbed;
    c.n = parse_positive_int(s.substr(10), "case perturbed:<n>");
    return c;
  }
  throw InvalidInput("unknown case name '" + s + "'");
}

/// Descriptor written by synth when no grid is given.
inline constexpr const char* kDescriptorFile = "case.txt";

inline CaseSpec parse_case(const std::string& s) {
  if (s == "exact" || s.rfind("perturbed:", 0) == 0) return parse_case_name(s);
  const fs::path dir(s);
  if (!fs::is_directory(dir))
    throw InvalidInput("case '" + s + "' is neither 'exact', 'perturbed:<n>' nor an existing directory");
  if (fs::exists(dir / kDescriptorFile)) {
    const auto d = RunManifest::read(dir / kDescriptorFile);
    const auto name = d.get("case");
    if (!name) throw InvalidInput("descriptor '" + (dir / kDescriptorFile).string() + "' lacks 'case'");
    return parse_case_name(*name);
  }
  CaseSpec c;
  c.kind = CaseSpec::Kind::Directory;
  c.dir = dir;
  return c;
}

inline const char* const kDataFiles[] = {"phi.csv",      "X1.csv",       "X2.csv",   "u0_1.csv", "u0_2.csv",
                                         "u0star_1.csv", "u0star_2.csv", "uT_1.csv", "uT_2.csv"};

inline double manifest_real(const RunManifest& m, const std::string& key, const fs::path& where) {
  const auto v = m.get(key);
  if (!v) throw InvalidInput("'" + where.string() + "' lacks '" + key + "'");
  double x = 0.0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), x);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size())
    throw InvalidInput("'" + where.string() + "': '" + key + "' is not a number");
  return x;
}

/// Reads the nine data files plus the constants recorded in the directory's manifest.
inline ProblemData load_case_directory(const fs::path& dir) {
  const auto m = RunManifest::read(dir / "manifest.txt");
  ElasticConstants k{manifest_real(m, "lambda", dir / "manifest.txt"), manifest_real(m, "mu", dir / "manifest.txt"),
                     manifest_real(m, "T", dir / "manifest.txt")};
  k.validate();
  const auto phi = read_time_signal(dir / "phi.csv");
  if (phi.T() != k.T) throw InvalidInput("phi.csv: T differs from the manifest");
  const auto X = read_boundary(dir / "X1.csv", dir / "X2.csv", k.T);
  auto vec = [&](const char* a, const char* b) { return VectorField2D(read_field(dir / a), read_field(dir / b)); };
  return ProblemData(k, phi, X, vec("u0_1.csv", "u0_2.csv"), vec("u0star_1.csv", "u0star_2.csv"),
                     vec("uT_1.csv", "uT_2.csv"));
}

inline void write_case_directory(const fs::path& dir, const ProblemData& I) {
  fs::create_directories(dir);
  write_time_signal(dir / "phi.csv", I.phi);
  write_boundary_component(dir / "X1.csv", I.X, 1);
  write_boundary_component(dir / "X2.csv", I.X, 2);
  write_field(dir / "u0_1.csv", I.u0.component(1));
  write_field(dir / "u0_2.csv", I.u0.component(2));
  write_field(dir / "u0star_1.csv", I.u0star.component(1));
  write_field(dir / "u0star_2.csv", I.u0star.component(2));
  write_field(dir / "uT_1.csv", I.uT.component(1));
  write_field(dir / "uT_2.csv", I.uT.component(2));
}

/// Closed-form source for named cases, quadrature source for directories.
inline std::shared_ptr<const SpectralSource> make_source(const CaseSpec& c, double* T_out = nullptr) {
  switch (c.kind) {
    case CaseSpec::Kind::Exact:
      if (T_out) *T_out = experiment::constants().T;
      return std::make_shared<experiment::ClosedFormSource>();
    case CaseSpec::Kind::Perturbed:
      if (T_out) *T_out = experiment::constants().T;
      return std::make_shared<experiment::ClosedFormSource>(c.n);
    case CaseSpec::Kind::Directory: {
      const auto I = load_case_directory(c.dir);
      if (T_out) *T_out = I.constants.T;
      return std::make_shared<QuadratureSource>(I, QuadratureOptions{}, "quadrature " + c.dir.string());
    }
  }
  throw InvalidInput("unknown case kind");
}

inline fs::path manifest_beside(const fs::path& out) {
  return (out.has_parent_path() ? out.parent_path() : fs::path(".")) / "manifest.txt";
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  int n = 0;
  fs::path out;
  std::optional<std::size_t> grid;
  std::size_t boundary_time_nodes = 401;
  std::size_t phi_nodes = 2001;
};

inline int cmd_synth(const SynthOptions& o, std::ostream& err = std::cerr) {
  RunManifest m("synth");
  m.set("n", o.n);
  m.set("out", o.out.string());
  if (o.grid) m.set("grid", *o.grid);
  return run_recorded(m, o.out / "manifest.txt", [&] {
    if (o.n < 1) throw InvalidInput("synth: --n must be >= 1");
    const auto k = experiment::constants();
    m.set("epsilon", experiment::epsilon_for(o.n));
    m.set("lambda", k.lambda);
    m.set("mu", k.mu);
    m.set("T", k.T);
    fs::create_directories(o.out);
    if (!o.grid) {
      RunManifest d("descriptor");
      d.set("case", "perturbed:" + std::to_string(o.n));
      d.set("n", o.n);
      d.write(o.out / kDescriptorFile);
      m.set("representation", "analytic");
      m.set("files", kDescriptorFile);
      return;
    }
    const auto I = experiment::sampled_data(o.n, *o.grid, o.boundary_time_nodes, o.phi_nodes);
    write_case_directory(o.out, I);
    m.set("representation", "sampled");
    m.set("boundary_time_nodes", o.boundary_time_nodes);
    m.set("phi_nodes", o.phi_nodes);
    std::string files;
    for (const char* f : kDataFiles) files += (files.empty() ? "" : ",") + std::string(f);
    m.set("files", files);
  }, err);
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructOptions {
  std::string case_name = "exact";
  double epsilon = 1e-2;
  std::optional<RegMode> mode;
  std::size_t grid = 101;
  fs::path out = "reconstruction.csv";
  std::optional<double> spacing;
};

/// `<dir>/<stem>_f1.csv` and `_f2.csv` for an --out path.
inline std::pair<fs::path, fs::path> reconstruction_paths(const fs::path& out) {
  const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  const std::string stem = out.extension() == ".csv" ? out.stem().string() : out.filename().string();
  return {dir / (stem + "_f1.csv"), dir / (stem + "_f2.csv")};
}

inline int cmd_reconstruct(const ReconstructOptions& o, std::ostream& err = std::cerr) {
  RunManifest m("reconstruct");
  m.set("case", o.case_name);
  m.set("epsilon", o.epsilon);
  m.set("grid", o.grid);
  m.set("out", o.out.string());
  return run_recorded(m, manifest_beside(o.out), [&] {
    const auto c = parse_case(o.case_name);
    double T = 1.0;
    const auto src = make_source(c, &T);
    const RegMode mode = o.mode.value_or(default_mode(o.epsilon));
    const auto params = select_params(o.epsilon, T, mode);
    m.set("mode", std::string(mode_name(mode)));
    m.set("q", params.q);
    m.set("delta", params.delta);
    m.set("R", params.R);
    if (params.R_alt_9epsT) {
      m.set("R_theorem_9eT", params.R);
      m.set("R_theorem_9epsT", *params.R_alt_9epsT);
    }
    m.set("source", src->describe());
    const auto rec = reconstruct(*src, params, GridSpec(o.grid), o.spacing);
    m.set("spacing", rec.spacing);
    m.set("lattice_nodes", rec.lattice_nodes);
    const auto [p1, p2] = reconstruction_paths(o.out);
    if (!p1.parent_path().empty()) fs::create_directories(p1.parent_path());
    write_field(p1, rec.f1);
    write_field(p2, rec.f2);
    m.set("output_f1", p1.string());
    m.set("output_f2", p2.string());
  }, err);
}

// ---------------------------------------------------------------------------
// spectra

struct SpectraOptions {
  std::string case_name = "exact";
  double rmax = 40.0;
  double spacing = 0.25;
  fs::path out = "spectra.csv";
};

inline int cmd_spectra(const SpectraOptions& o, std::ostream& err = std::cerr) {
  RunManifest m("spectra");
  m.set("case", o.case_name);
  m.set("rmax", o.rmax);
  m.set("spacing", o.spacing);
  m.set("out", o.out.string());
  return run_recorded(m, manifest_beside(o.out), [&] {
    if (!(o.rmax > 0.0)) throw InvalidInput("spectra: --rmax must be > 0");
    if (!(o.spacing > 0.0)) throw InvalidInput("spectra: --spacing must be > 0");
    const auto c = parse_case(o.case_name);
    const auto src = make_source(c);
    m.set("source", src->describe());
    const auto S = src->sample_lattice(FrequencyLattice::make(o.rmax, o.spacing));
    if (o.out.has_parent_path()) fs::create_directories(o.out.parent_path());
    std::ofstream out(o.out);
    if (!out) throw InvalidInput("cannot open '" + o.out.string() + "' for writing");
    out << "# alpha1,alpha2,d1,d2,d,h0,h1,h2,g1,g2\n";
    std::size_t rows = 0;
    for (std::size_t i = 0; i < S.data.size(); ++i) {
      if (!S.inside[i]) continue;
      const auto& s = S.data[i];
      const double v[] = {s.alpha.alpha1, s.alpha.alpha2, s.d1, s.d2, s.d, s.h0, s.h[0], s.h[1], s.g[0], s.g[1]};
      for (std::size_t j = 0; j < 10; ++j) out << (j ? "," : "") << format_double(v[j]);
      out << '\n';
      ++rows;
    }
    if (!out) throw InvalidInput("write failed for '" + o.out.string() + "'");
    m.set("rows", rows);
  }, err);
}

// ---------------------------------------------------------------------------
// convergence

struct ConvergenceOptions {
  std::vector<int> n_list;
  fs::path out = "convergence.csv";
  std::size_t grid = 101;
};

inline std::vector<int> parse_n_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_positive_int(item, "--n-list"));
  if (out.empty()) throw InvalidInput("--n-list: empty list");
  return out;
}

inline int cmd_convergence(const ConvergenceOptions& o, std::ostream& err = std::cerr) {
  RunManifest m("convergence");
  std::string list;
  for (int n : o.n_list) list += (list.empty() ? "" : ",") + std::to_string(n);
  m.set("n_list", list);
  m.set("grid", o.grid);
  m.set("out", o.out.string());
  return run_recorded(m, manifest_beside(o.out), [&] {
    const auto rows = experiment::convergence_sweep(o.n_list, {o.grid, std::nullopt});
    if (o.out.has_parent_path()) fs::create_directories(o.out.parent_path());
    std::ofstream out(o.out);
    if (!out) throw InvalidInput("cannot open '" + o.out.string() + "' for writing");
    out << "# n,epsilon,delta,R,l2_err_f1,l2_err_f2,linf_err_f1,linf_err_f2,disturbed_l2_err\n";
    for (const auto& r : rows) {
      out << r.n;
      for (double v : {r.epsilon, r.delta, r.R, r.l2_err[0], r.l2_err[1], r.linf_err[0], r.linf_err[1],
                       r.disturbed_l2_err})
        out << ',' << format_double(v);
      out << '\n';
    }
    if (!out) throw InvalidInput("write failed for '" + o.out.string() + "'");
    m.set("rows", rows.size());
  }, err);
}

}  // namespace bodyforce::cli

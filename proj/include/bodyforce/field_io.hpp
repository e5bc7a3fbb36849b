#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "bodyforce/errors.hpp"
#include "bodyforce/fields.hpp"

namespace bodyforce {

/// Shortest text with 17 significant digits; round-trips every finite double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace io_detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct LineReader {
  std::istream& in;
  std::string source;
  std::size_t line_no = 0;
  std::string line;

  bool next() {
    if (!std::getline(in, line)) return false;
    ++line_no;
    return true;
  }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source, line_no, what); }
};

inline double parse_value(const LineReader& r, std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    r.fail("not a number: '" + std::string(cell) + "'");
  if (!std::isfinite(v)) r.fail("non-finite value '" + std::string(cell) + "'");
  return v;
}

inline std::vector<double> parse_row(const LineReader& r, std::size_t expected) {
  std::vector<double> out;
  out.reserve(expected);
  std::string_view rest(r.line);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(parse_value(r, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (out.size() != expected)
    r.fail("expected " + std::to_string(expected) + " values, found " + std::to_string(out.size()));
  return out;
}

// Parses "# <kind> key=value key=value ..." into a map.
inline std::map<std::string, std::string> parse_header(const LineReader& r, std::string_view kind) {
  std::string_view s = trim(r.line);
  if (s.empty() || s.front() != '#') r.fail("missing '# " + std::string(kind) + "' header");
  s.remove_prefix(1);
  std::istringstream tokens{std::string(s)};
  std::string word;
  if (!(tokens >> word) || word != kind) r.fail("expected header kind '" + std::string(kind) + "'");
  std::map<std::string, std::string> kv;
  while (tokens >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos || eq == 0) r.fail("malformed header token '" + word + "'");
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return kv;
}

inline const std::string& header_value(const LineReader& r, const std::map<std::string, std::string>& kv,
                                       const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) r.fail("header lacks '" + key + "='");
  return it->second;
}

inline std::size_t header_count(const LineReader& r, const std::map<std::string, std::string>& kv,
                                const std::string& key) {
  const std::string& v = header_value(r, kv, key);
  std::size_t n = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), n);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || n == 0)
    r.fail("header '" + key + "' is not a positive integer");
  return n;
}

inline double header_real(const LineReader& r, const std::map<std::string, std::string>& kv, const std::string& key) {
  return parse_value(r, header_value(r, kv, key));
}

// Skips blank lines; returns false at end of input.
inline bool next_content(LineReader& r) {
  while (r.next())
    if (!trim(r.line).empty()) return true;
  return false;
}

inline void write_row(std::ostream& out, std::span<const double> row) {
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j) out << ',';
    out << format_double(row[j]);
  }
  out << '\n';
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// Scalar fields

inline void write_field(std::ostream& out, const ScalarField2D& w) {
  const auto& g = w.grid();
  const auto v = w.values();
  out << "# scalar-field nx=" << g.nx() << " ny=" << g.ny() << '\n';
  for (std::size_t i = 0; i < g.ny(); ++i) io_detail::write_row(out, v.subspan(i * g.nx(), g.nx()));
}

inline void write_field(const std::filesystem::path& path, const ScalarField2D& w) {
  auto out = io_detail::open_out(path);
  write_field(out, w);
  if (!out) throw InvalidInput("write failed for '" + path.string() + "'");
}

inline ScalarField2D read_field(std::istream& in, const std::string& source = "<stream>") {
  io_detail::LineReader r{in, source, 0, {}};
  if (!io_detail::next_content(r)) r.fail("empty input");
  const auto kv = io_detail::parse_header(r, "scalar-field");
  const std::size_t nx = io_detail::header_count(r, kv, "nx");
  const std::size_t ny = io_detail::header_count(r, kv, "ny");
  if (nx < 3 || ny < 3 || nx % 2 == 0 || ny % 2 == 0) r.fail("node counts must be odd and >= 3");
  std::vector<double> values;
  values.reserve(nx * ny);
  for (std::size_t i = 0; i < ny; ++i) {
    if (!io_detail::next_content(r)) r.fail("expected " + std::to_string(ny) + " rows, found " + std::to_string(i));
    const auto row = io_detail::parse_row(r, nx);
    values.insert(values.end(), row.begin(), row.end());
  }
  if (io_detail::next_content(r)) r.fail("unexpected content after " + std::to_string(ny) + " rows");
  return ScalarField2D::sampled(GridSpec(nx, ny), std::move(values));
}

inline ScalarField2D read_field(const std::filesystem::path& path) {
  auto in = io_detail::open_in(path);
  return read_field(in, path.string());
}

// ---------------------------------------------------------------------------
// Time signals

inline void write_time_signal(std::ostream& out, const TimeSignal& s) {
  const auto v = s.samples();
  out << "# time-signal nt=" << v.size() << " T=" << format_double(s.T()) << '\n';
  for (double x : v) out << format_double(x) << '\n';
}

inline void write_time_signal(const std::filesystem::path& path, const TimeSignal& s) {
  auto out = io_detail::open_out(path);
  write_time_signal(out, s);
  if (!out) throw InvalidInput("write failed for '" + path.string() + "'");
}

inline TimeSignal read_time_signal(std::istream& in, const std::string& source = "<stream>") {
  io_detail::LineReader r{in, source, 0, {}};
  if (!io_detail::next_content(r)) r.fail("empty input");
  const auto kv = io_detail::parse_header(r, "time-signal");
  const std::size_t nt = io_detail::header_count(r, kv, "nt");
  const double T = io_detail::header_real(r, kv, "T");
  if (nt < 3 || nt % 2 == 0) r.fail("nt must be odd and >= 3");
  if (!(T > 0.0)) r.fail("T must be > 0");
  std::vector<double> v;
  v.reserve(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    if (!io_detail::next_content(r)) r.fail("expected " + std::to_string(nt) + " values, found " + std::to_string(k));
    v.push_back(io_detail::parse_row(r, 1)[0]);
  }
  if (io_detail::next_content(r)) r.fail("unexpected content after " + std::to_string(nt) + " values");
  return TimeSignal::sampled(std::move(v), T);
}

inline TimeSignal read_time_signal(const std::filesystem::path& path) {
  auto in = io_detail::open_in(path);
  return read_time_signal(in, path.string());
}

// ---------------------------------------------------------------------------
// Boundary traces: one file per traction component, holding four edge blocks.

inline void write_edge_trace(std::ostream& out, Edge e, int component, const EdgeTrace& tr) {
  const auto v = tr.values();
  out << "# boundary-trace edge=" << edge_name(e) << " component=" << component << " ns=" << tr.ns()
      << " nt=" << tr.nt() << '\n';
  for (std::size_t k = 0; k < tr.nt(); ++k) io_detail::write_row(out, v.subspan(k * tr.ns(), tr.ns()));
}

inline void write_boundary_component(const std::filesystem::path& path, const BoundaryTrace& X, int component) {
  auto out = io_detail::open_out(path);
  for (Edge e : kEdges) write_edge_trace(out, e, component, X.component(e, component));
  if (!out) throw InvalidInput("write failed for '" + path.string() + "'");
}

/// Reads the four edge blocks of one traction component (any block order).
inline std::array<EdgeTrace, 4> read_boundary_component(std::istream& in, int component, double T,
                                                        const std::string& source = "<stream>") {
  io_detail::LineReader r{in, source, 0, {}};
  std::array<std::optional<EdgeTrace>, 4> blocks;
  while (io_detail::next_content(r)) {
    const auto kv = io_detail::parse_header(r, "boundary-trace");
    const auto edge = parse_edge(io_detail::header_value(r, kv, "edge"));
    if (!edge) r.fail("unknown edge '" + io_detail::header_value(r, kv, "edge") + "'");
    if (io_detail::header_count(r, kv, "component") != static_cast<std::size_t>(component))
      r.fail("expected component=" + std::to_string(component));
    const std::size_t ns = io_detail::header_count(r, kv, "ns");
    const std::size_t nt = io_detail::header_count(r, kv, "nt");
    if (ns < 3 || nt < 3 || ns % 2 == 0 || nt % 2 == 0) r.fail("ns and nt must be odd and >= 3");
    auto& slot = blocks[static_cast<std::size_t>(*edge)];
    if (slot) r.fail("duplicate block for edge " + std::string(edge_name(*edge)));
    std::vector<double> v;
    v.reserve(ns * nt);
    for (std::size_t k = 0; k < nt; ++k) {
      if (!io_detail::next_content(r))
        r.fail("expected " + std::to_string(nt) + " rows, found " + std::to_string(k));
      const auto row = io_detail::parse_row(r, ns);
      v.insert(v.end(), row.begin(), row.end());
    }
    slot = EdgeTrace::sampled(ns, nt, T, std::move(v));
  }
  std::array<EdgeTrace, 4> out{EdgeTrace::zero(T), EdgeTrace::zero(T), EdgeTrace::zero(T), EdgeTrace::zero(T)};
  for (Edge e : kEdges) {
    const auto& b = blocks[static_cast<std::size_t>(e)];
    if (!b) throw ParseError(source, r.line_no, "missing block for edge " + std::string(edge_name(e)));
    out[static_cast<std::size_t>(e)] = *b;
  }
  return out;
}

inline BoundaryTrace read_boundary(const std::filesystem::path& x1_path, const std::filesystem::path& x2_path,
                                   double T) {
  auto in1 = io_detail::open_in(x1_path);
  auto in2 = io_detail::open_in(x2_path);
  const auto c1 = read_boundary_component(in1, 1, T, x1_path.string());
  const auto c2 = read_boundary_component(in2, 2, T, x2_path.string());
  std::array<BoundaryTrace::EdgeComponents, 4> parts{
      BoundaryTrace::EdgeComponents{c1[0], c2[0]}, BoundaryTrace::EdgeComponents{c1[1], c2[1]},
      BoundaryTrace::EdgeComponents{c1[2], c2[2]}, BoundaryTrace::EdgeComponents{c1[3], c2[3]}};
  return BoundaryTrace(T, std::move(parts));
}

}  // namespace bodyforce

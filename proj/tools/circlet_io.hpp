#pragma once

// File formats of the command-line tool.
//
//   signal:     <name>.csv with header coord,re[,im] plus sidecar <name>.json
//               {"grid": "circle"|"line", "n_samples": N, "window": [lo, hi]}
//   report:     JSON, see report_to_json()
//   scalogram:  <name>.json metadata plus <name>.re.csv and <name>.im.csv,
//               rows = scales (log-ascending), columns = angles
//
// Numbers are printed with %.17g so that equal inputs give byte-identical files.
// Every write goes to a temporary file in the target directory first and is then
// renamed into place.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "circlet/circle_cwt.hpp"
#include "circlet/line_cwt.hpp"
#include "json.hpp"

namespace circlet::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using cplx = std::complex<double>;

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- atomic writes ----

/// Files staged in temporaries and renamed together by commit().
class AtomicWriter {
 public:
  AtomicWriter() = default;
  AtomicWriter(const AtomicWriter&) = delete;
  AtomicWriter& operator=(const AtomicWriter&) = delete;
  ~AtomicWriter() {
    for (const auto& [tmp, dst] : staged_) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
  }

  void stage(const fs::path& dst, const std::string& content) {
    fs::path tmp = dst;
    tmp += ".tmp." + std::to_string(::getpid());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot open " + tmp.string() + " for writing");
      out << content;
      out.flush();
      if (!out) throw Error("write failed: " + tmp.string());
    }
    staged_.emplace_back(tmp, dst);
  }

  void commit() {
    for (const auto& [tmp, dst] : staged_) fs::rename(tmp, dst);
    staged_.clear();
  }

 private:
  std::vector<std::pair<fs::path, fs::path>> staged_;
};

inline void write_file_atomic(const fs::path& dst, const std::string& content) {
  AtomicWriter w;
  w.stage(dst, content);
  w.commit();
}

inline std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json(const fs::path& p) {
  try {
    return json::parse(read_file(p));
  } catch (const json::parse_error& e) {
    throw ParseError(p.string() + ": " + e.what(), 0);
  }
}

// ---- CSV ----

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    std::size_t start = cell.find_first_not_of(' ');
    out.push_back(start == std::string::npos ? std::string{} : cell.substr(start));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_number(const std::string& cell, std::size_t line) {
  if (cell.empty()) throw ParseError("empty field", line);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + cell + "'", line);
  }
  if (used != cell.size()) throw ParseError("not a number: '" + cell + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value", line);
  return v;
}

struct SignalTable {
  std::vector<double> coord;
  std::vector<cplx> values;
};

inline SignalTable read_signal_csv(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;
  const auto header = split_csv_line(line);
  const bool has_im = header.size() == 3;
  if (header.size() < 2 || header.size() > 3 || header[0] != "coord" || header[1] != "re" || (has_im && header[2] != "im"))
    throw ParseError("header must be coord,re[,im]", lineno);
  SignalTable t;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " fields, found " + std::to_string(cells.size()),
                       lineno);
    const double x = parse_number(cells[0], lineno);
    if (!t.coord.empty() && !(x > t.coord.back())) throw ParseError("coordinates must be strictly increasing", lineno);
    t.coord.push_back(x);
    t.values.emplace_back(parse_number(cells[1], lineno), has_im ? parse_number(cells[2], lineno) : 0.0);
  }
  if (t.coord.empty()) throw ParseError("no data rows", lineno);
  return t;
}

inline std::string signal_csv(std::span<const double> coord, std::span<const cplx> values) {
  std::string out = "coord,re,im\n";
  for (std::size_t j = 0; j < coord.size(); ++j)
    out += fmt(coord[j]) + "," + fmt(values[j].real()) + "," + fmt(values[j].imag()) + "\n";
  return out;
}

inline fs::path sidecar_path(const fs::path& csv) {
  fs::path p = csv;
  p.replace_extension(".json");
  return p;
}

// ---- signals ----

enum class GridKind { circle, line };

struct LoadedSignal {
  GridKind kind = GridKind::circle;
  std::optional<circle::CircleSignal> circle;
  std::optional<line::LineSignal> line;
};

namespace detail {

inline void check_nodes(const std::vector<double>& coord, auto node, double scale, const fs::path& p) {
  for (std::size_t j = 0; j < coord.size(); ++j)
    if (std::abs(coord[j] - node(j)) > 1e-9 * scale)
      throw ParseError(p.string() + ": coordinate does not match the declared grid", j + 2);
}

}  // namespace detail

/// Read a signal and its sidecar. Without a sidecar the file must be a circle
/// signal on the midpoint grid.
inline LoadedSignal read_signal(const fs::path& p) {
  const auto t = read_signal_csv(p);
  const auto side = sidecar_path(p);
  LoadedSignal s;
  std::size_t n = t.coord.size();
  double lo = -circle::pi / 2, hi = circle::pi / 2;
  if (fs::exists(side)) {
    const auto meta = parse_json(side);
    try {
      const auto kind = meta.at("grid").get<std::string>();
      if (kind == "circle") s.kind = GridKind::circle;
      else if (kind == "line") s.kind = GridKind::line;
      else throw ParseError(side.string() + ": grid must be circle or line", 0);
      n = meta.at("n_samples").get<std::size_t>();
      const auto w = meta.at("window");
      lo = w.at(0).get<double>();
      hi = w.at(1).get<double>();
    } catch (const json::exception& e) {
      throw ParseError(side.string() + ": " + e.what(), 0);
    }
    if (n != t.coord.size())
      throw ParseError(p.string() + ": " + std::to_string(t.coord.size()) + " rows but sidecar declares " +
                           std::to_string(n),
                       t.coord.size() + 1);
  }
  const std::string label = p.stem().string();
  if (s.kind == GridKind::circle) {
    if (std::abs(lo + circle::pi / 2) > 1e-12 || std::abs(hi - circle::pi / 2) > 1e-12)
      throw ParseError(side.string() + ": circle window must be [-pi/2, pi/2]", 0);
    const circle::CircleGrid g(n);
    detail::check_nodes(t.coord, [&](std::size_t j) { return g.node(j); }, 1.0, p);
    s.circle = circle::CircleSignal::from_samples(g, t.values, label);
  } else {
    const line::LineGrid g(lo, hi, n);
    detail::check_nodes(t.coord, [&](std::size_t j) { return g.node(j); }, std::max(1.0, g.length()), p);
    s.line = line::LineSignal::from_samples(g, t.values, label);
  }
  return s;
}

inline std::string sidecar_json(GridKind kind, std::size_t n, double lo, double hi) {
  json j;
  j["grid"] = kind == GridKind::circle ? "circle" : "line";
  j["n_samples"] = n;
  j["window"] = {lo, hi};
  return j.dump(2) + "\n";
}

inline void stage_signal(AtomicWriter& w, const fs::path& p, const circle::CircleSignal& s) {
  const auto nodes = s.grid().nodes();
  w.stage(p, signal_csv(nodes, s.values()));
  w.stage(sidecar_path(p), sidecar_json(GridKind::circle, s.grid().size(), -circle::pi / 2, circle::pi / 2));
}

inline void stage_signal(AtomicWriter& w, const fs::path& p, const line::LineSignal& s) {
  std::vector<double> nodes(s.grid().size());
  for (std::size_t j = 0; j < nodes.size(); ++j) nodes[j] = s.grid().node(j);
  w.stage(p, signal_csv(nodes, s.values()));
  w.stage(sidecar_path(p), sidecar_json(GridKind::line, s.grid().size(), s.grid().x_lo(), s.grid().x_hi()));
}

// ---- admissibility report ----

inline json report_to_json(const circle::AdmissibilityReport& r) {
  json j;
  j["wavelet"] = r.wavelet;
  j["n_max"] = r.n_max;
  json lam = json::array();
  for (long n = -r.n_max; n <= r.n_max; ++n) lam.push_back({{"n", n}, {"value", r.lambda_at(n)}});
  j["lambda"] = std::move(lam);
  j["sup"] = r.sup;
  j["inf"] = r.inf;
  j["weak_integral"] = r.weak_integral;
  j["weak_decay_ok"] = r.weak_decay_ok;
  j["converged"] = r.converged;
  j["plateau"] = r.plateau;
  j["admissible"] = r.admissible;
  const auto& t = r.truncation;
  j["truncation"] = {{"a_min", t.a_min},       {"a_max", t.a_max},       {"count", t.count},
                     {"tail_lo", t.tail_lo},   {"tail_hi", t.tail_hi},   {"decay_lo", t.decay_lo},
                     {"decay_hi", t.decay_hi}, {"trusted_range", t.trusted_range}};
  return j;
}

inline circle::AdmissibilityReport report_from_json(const json& j) {
  circle::AdmissibilityReport r;
  try {
    const auto& lam = j.at("lambda");
    if (!lam.is_array() || lam.empty() || lam.size() % 2 == 0) throw ParseError("report: lambda must list modes -n..n", 0);
    r.n_max = static_cast<long>(lam.size() / 2);
    r.lambda.resize(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) {
      const long n = lam[i].at("n").get<long>();
      if (n != static_cast<long>(i) - r.n_max) throw ParseError("report: lambda entries out of order", 0);
      const double v = lam[i].at("value").get<double>();
      if (!std::isfinite(v) || v < 0.0) throw ParseError("report: lambda values must be finite and non-negative", 0);
      r.lambda[i] = v;
    }
    r.sup = j.at("sup").get<double>();
    r.inf = j.at("inf").get<double>();
    r.weak_integral = j.at("weak_integral").get<double>();
    r.admissible = j.at("admissible").get<bool>();
    const auto& t = j.at("truncation");
    r.truncation.a_min = t.at("a_min").get<double>();
    r.truncation.a_max = t.at("a_max").get<double>();
    r.truncation.count = t.at("count").get<std::size_t>();
    r.truncation.tail_lo = t.at("tail_lo").get<double>();
    r.truncation.tail_hi = t.at("tail_hi").get<double>();
    if (j.contains("wavelet")) r.wavelet = j["wavelet"].get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what(), 0);
  }
  return r;
}

// ---- scalogram ----

inline fs::path with_suffix(const fs::path& meta, const std::string& suffix) {
  fs::path p = meta;
  p.replace_extension();
  p += suffix;
  return p;
}

inline std::string matrix_csv(std::span<const cplx> v, std::size_t rows, std::size_t cols, bool imag) {
  std::string out;
  out.reserve(rows * cols * 24);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < cols; ++k) {
      if (k) out += ',';
      const cplx z = v[i * cols + k];
      out += fmt(imag ? z.imag() : z.real());
    }
    out += '\n';
  }
  return out;
}

inline void stage_scalogram(AtomicWriter& w, const fs::path& meta, const circle::Scalogram& s) {
  const auto re = with_suffix(meta, ".re.csv"), im = with_suffix(meta, ".im.csv");
  json j;
  j["kind"] = "circle_scalogram";
  j["wavelet"] = s.wavelet;
  j["signal_samples"] = s.signal_samples;
  j["n_angles"] = s.n_angles;
  j["scales"] = {{"a_min", s.scales.a_min()}, {"a_max", s.scales.a_max()}, {"count", s.scales.size()}};
  j["rows"] = "scales, log-ascending";
  j["cols"] = "angles, midpoint grid on (-pi/2, pi/2)";
  j["re"] = re.filename().string();
  j["im"] = im.filename().string();
  w.stage(meta, j.dump(2) + "\n");
  w.stage(re, matrix_csv(s.values, s.scales.size(), s.n_angles, false));
  w.stage(im, matrix_csv(s.values, s.scales.size(), s.n_angles, true));
}

inline std::vector<double> read_matrix_csv(const fs::path& p, std::size_t rows, std::size_t cols) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  std::vector<double> out;
  out.reserve(rows * cols);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != cols)
      throw ParseError(p.string() + ": expected " + std::to_string(cols) + " columns", lineno);
    for (const auto& c : cells) out.push_back(parse_number(c, lineno));
  }
  if (out.size() != rows * cols) throw ParseError(p.string() + ": expected " + std::to_string(rows) + " rows", lineno);
  return out;
}

inline circle::Scalogram read_scalogram(const fs::path& meta) {
  const auto j = parse_json(meta);
  try {
    if (j.at("kind").get<std::string>() != "circle_scalogram") throw ParseError(meta.string() + ": not a scalogram", 0);
    const auto& sc = j.at("scales");
    const ScaleGrid scales(sc.at("a_min").get<double>(), sc.at("a_max").get<double>(), sc.at("count").get<std::size_t>());
    const auto n_angles = j.at("n_angles").get<std::size_t>();
    const auto samples = j.at("signal_samples").get<std::size_t>();
    const auto dir = meta.parent_path();
    const auto re = read_matrix_csv(dir / j.at("re").get<std::string>(), scales.size(), n_angles);
    const auto im = read_matrix_csv(dir / j.at("im").get<std::string>(), scales.size(), n_angles);
    circle::Scalogram s{scales, n_angles, samples, j.at("wavelet").get<std::string>(), {}};
    s.values.resize(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) s.values[i] = {re[i], im[i]};
    return s;
  } catch (const json::exception& e) {
    throw ParseError(meta.string() + ": " + e.what(), 0);
  }
}

}  // namespace circlet::io

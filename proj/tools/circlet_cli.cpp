// circlet: command-line front end.
//
// Exit codes: 0 success, 2 domain-negative result (non-admissible wavelet,
// non-decreasing error table...), 1 any error. CIRCLET_THREADS caps the worker
// count.

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "circlet/circlet.hpp"
#include "circlet_io.hpp"

namespace {

using namespace circlet;
using circle::CircleGrid;
using circle::CircleSignal;
using circle::cplx;
using io::json;

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNegative = 2;

struct ScaleOpts {
  double a_min = 1e-3;
  double a_max = 1e3;
  std::size_t count = 400;
  ScaleGrid grid() const { return {a_min, a_max, count}; }
};

void add_scale_opts(CLI::App* cmd, ScaleOpts& s) {
  cmd->add_option("--scale-min", s.a_min, "smallest scale")->capture_default_str();
  cmd->add_option("--scale-max", s.a_max, "largest scale")->capture_default_str();
  cmd->add_option("--scale-count", s.count, "number of log-uniform scale nodes")->capture_default_str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream ss(s);
  while (std::getline(ss, part, sep)) out.push_back(part);
  return out;
}

/// Builtin circle wavelets: dog:ALPHA[:balanced], gaussian, constant, mexhat.
std::optional<CircleSignal> builtin_wavelet(const std::string& name, std::size_t n) {
  const CircleGrid g(n);
  const auto parts = split(name, ':');
  if (parts.empty()) return std::nullopt;
  if (parts[0] == "dog") {
    if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && parts[2] != "balanced"))
      throw DomainError("builtin dog: expected dog:ALPHA[:balanced]");
    return circle::make_dog(std::stod(parts[1]), parts.size() == 3, g);
  }
  if (name == "gaussian")
    return CircleSignal::from_function(g, [](double t) -> cplx { return std::exp(-std::tan(t) * std::tan(t)); }, name);
  if (name == "constant") return CircleSignal::from_function(g, [](double) -> cplx { return 1.0; }, name);
  if (name == "mexhat") {
    auto f = [](double t) -> cplx {
      const double x = std::tan(t);
      return (1.0 - x * x) * std::exp(-0.5 * x * x) / std::cos(t);
    };
    return CircleSignal::from_function(g, f, name);
  }
  return std::nullopt;
}

CircleSignal load_circle(const std::string& path) {
  auto s = io::read_signal(path);
  if (s.kind != io::GridKind::circle) throw DomainError(path + ": expected a circle signal");
  return *s.circle;
}

/// --wavelet FILE or --builtin NAME (the latter also accepted in --wavelet).
CircleSignal resolve_wavelet(const std::string& file, const std::string& builtin, std::size_t n) {
  if (!builtin.empty()) {
    auto w = builtin_wavelet(builtin, n);
    if (!w) throw DomainError("unknown builtin wavelet '" + builtin + "'");
    return *w;
  }
  if (file.empty()) throw DomainError("need --wavelet FILE or --builtin NAME");
  if (!std::filesystem::exists(file))
    if (auto w = builtin_wavelet(file, n)) return *w;
  return load_circle(file);
}

/// Builtin circle signals: random:BAND (seeded), cos2 (cos 2t + 0.3 sin 4t), zero.
std::optional<CircleSignal> builtin_signal(const std::string& name, std::size_t n, std::uint64_t seed) {
  const CircleGrid g(n);
  const auto parts = split(name, ':');
  if (parts.size() == 2 && parts[0] == "random") {
    const long band = std::stol(parts[1]);
    if (band < 0 || band > static_cast<long>(n / 4)) throw DomainError("random:BAND needs 0 <= BAND <= n/4");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    circle::FourierCoeffs c(band);
    for (long k = -band; k <= band; ++k) c(k) = cplx(nd(rng), nd(rng));
    return CircleSignal::from_samples(g, circle::detail::synthesize_samples(c, n), name);
  }
  if (name == "cos2")
    return CircleSignal::from_function(
        g, [](double t) -> cplx { return std::cos(2 * t) + 0.3 * std::sin(4 * t); }, name);
  if (name == "zero") return CircleSignal::from_function(g, [](double) -> cplx { return 0.0; }, name);
  return std::nullopt;
}

CircleSignal resolve_signal(const std::string& spec, std::size_t n, std::uint64_t seed) {
  if (!std::filesystem::exists(spec))
    if (auto s = builtin_signal(spec, n, seed)) return *s;
  return load_circle(spec);
}

void print(const std::string& s) { std::fwrite(s.data(), 1, s.size(), stdout); }

std::string g17(double v) { return io::fmt(v); }

// ---- commands ----

struct AdmissibilityCmd {
  std::string wavelet, builtin, out;
  ScaleOpts scales;
  long n_max = 64;
  std::size_t n_samples = 1024;

  int run() const {
    const auto w = resolve_wavelet(wavelet, builtin, n_samples);
    const auto r = circle::admissibility(w, scales.grid(), n_max);
    if (!out.empty()) io::write_file_atomic(out, io::report_to_json(r).dump(2) + "\n");
    print("wavelet " + r.wavelet + " admissible=" + (r.admissible ? "true" : "false") + " inf=" + g17(r.inf) +
          " sup=" + g17(r.sup) + " weak_integral=" + g17(r.weak_integral) + "\n");
    return r.admissible ? kOk : kNegative;
  }
};

struct CwtCmd {
  std::string signal, wavelet, out;
  ScaleOpts scales;
  std::size_t n_angles = 0, n_samples = 1024;
  std::uint64_t seed = 0;

  int run() const {
    const auto psi = resolve_signal(signal, n_samples, seed);
    const bool wavelet_is_file = std::filesystem::exists(wavelet);
    const auto gamma = resolve_wavelet(wavelet, {}, 1024);
    if (wavelet_is_file && !(gamma.grid() == psi.grid()))
      throw DomainError("grid mismatch: signal has " + std::to_string(psi.grid().size()) + " samples, wavelet " +
                        std::to_string(gamma.grid().size()));
    const auto s = circle::analyze(psi, gamma, scales.grid(), n_angles);
    io::AtomicWriter w;
    io::stage_scalogram(w, out, s);
    w.commit();
    print("scalogram " + std::to_string(s.scales.size()) + "x" + std::to_string(s.n_angles) + " written to " + out + "\n");
    return kOk;
  }
};

struct IcwtCmd {
  std::string scalogram, wavelet, report, out, reference;

  int run() const {
    const auto s = io::read_scalogram(scalogram);
    const auto r = io::report_from_json(io::parse_json(report));
    if (!r.wavelet.empty() && r.wavelet != s.wavelet)
      throw DomainError("report is for wavelet '" + r.wavelet + "', scalogram for '" + s.wavelet + "'");
    const auto gamma = resolve_wavelet(wavelet, {}, 1024);
    if (gamma.label() != s.wavelet)
      throw DomainError("wavelet '" + gamma.label() + "' does not match the scalogram's '" + s.wavelet + "'");
    const auto rec = circle::synthesize(s, gamma, r);
    std::optional<CircleSignal> ref;
    if (!reference.empty()) {
      ref = load_circle(reference);
      if (!(ref->grid() == rec.signal.grid())) throw DomainError("grid mismatch between reference and scalogram");
    }
    io::AtomicWriter w;
    io::stage_signal(w, out, rec.signal);
    w.commit();
    print("refused_modes " + std::to_string(rec.refused.size()) + "\n");
    if (ref) {
      double num = 0.0, den = 0.0;
      for (std::size_t j = 0; j < ref->values().size(); ++j) {
        num += std::norm(rec.signal.values()[j] - ref->values()[j]);
        den += std::norm(ref->values()[j]);
      }
      print("relative_error " + g17(den > 0.0 ? std::sqrt(num / den) : std::sqrt(num)) + "\n");
    }
    return kOk;
  }
};

struct FrameCmd {
  std::string wavelet, builtin, out;
  ScaleOpts scales;
  long n_max = 64;
  std::size_t n_samples = 1024;

  int run() const {
    const auto w = resolve_wavelet(wavelet, builtin, n_samples);
    const auto r = circle::admissibility(w, scales.grid(), n_max);
    const auto fb = circle::frame_bounds(r);
    json j;
    j["wavelet"] = r.wavelet;
    j["c1"] = fb.c1;
    j["c2"] = fb.c2;
    if (fb.c1 > 0.0) j["ratio"] = fb.c2 / fb.c1;
    else j["ratio"] = nullptr;
    j["frame_eigenvalue_factor"] = circle::pi;
    j["plateau"] = fb.plateau;
    j["admissible"] = r.admissible;
    const std::string text = j.dump(2) + "\n";
    if (!out.empty()) io::write_file_atomic(out, text);
    print(text);
    if (!fb.plateau) std::fprintf(stderr, "warning: Lambda has not plateaued at n_max; truncation unsafe\n");
    return r.admissible ? kOk : kNegative;
  }
};

struct EuclidCmd {
  std::string r_list = "10,100,1000", out;
  double b = 0.7, a = 2.0, support = 1.0, window = 20.0;
  std::size_t n_samples = 4096;

  int run() const {
    std::vector<double> radii;
    for (const auto& p : split(r_list, ',')) radii.push_back(std::stod(p));
    if (radii.empty()) throw DomainError("--R-list is empty");
    const line::LineGrid g(-window, window, n_samples);
    const auto f = euclid::bump(g, support);
    std::vector<double> err(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) { err[i] = euclid::euclidean_limit_error(f, b, a, radii[i]); });
    json rows = json::array();
    bool decreasing = true;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      json row{{"R", radii[i]}, {"error", err[i]}};
      if (i > 0) {
        decreasing = decreasing && err[i] < err[i - 1];
        row["rate"] = std::log(err[i - 1] / err[i]) / std::log(radii[i] / radii[i - 1]);
      }
      rows.push_back(std::move(row));
    }
    json j{{"b", b}, {"a", a}, {"support", support}, {"window", {-window, window}}, {"n_samples", n_samples},
           {"table", std::move(rows)}, {"strictly_decreasing", decreasing}};
    const std::string text = j.dump(2) + "\n";
    if (!out.empty()) io::write_file_atomic(out, text);
    print(text);
    return decreasing ? kOk : kNegative;
  }
};

struct LaguerreCmd {
  double k = 1.0;
  long n_max = 8;
  std::size_t nodes = 128;
  std::string out;

  int run() const {
    const discrete::LaguerreBasisSpec spec(k, n_max);
    const double alpha = 2.0 * k - 1.0;
    const auto rule = quad::gauss_laguerre(nodes, alpha);
    // <phi_n|phi_m> = int r^{2k-1} e^{-r} (phi_n phi_m / (r^{2k} e^{-r})) dr
    json matrix = json::array();
    double off = 0.0, diag = 0.0;
    for (long n = 0; n <= n_max; ++n) {
      json row = json::array();
      for (long m = 0; m <= n_max; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes; ++i) {
          const double r = rule.nodes[i];
          acc += rule.weights[i] * std::exp(r - (alpha + 1.0) * std::log(r)) * discrete::laguerre_basis(spec, n, r) *
                 discrete::laguerre_basis(spec, m, r);
        }
        const double res = acc - (n == m ? 1.0 : 0.0);
        (n == m ? diag : off) = std::max(n == m ? diag : off, std::abs(res));
        row.push_back(res);
      }
      matrix.push_back(std::move(row));
    }
    json j{{"k", k}, {"q", spec.q()}, {"n_max", n_max}, {"nodes", nodes}, {"residual", std::move(matrix)},
           {"max_offdiag", off}, {"max_diag", diag}};
    const std::string text = j.dump(2) + "\n";
    if (!out.empty()) io::write_file_atomic(out, text);
    print(text);
    return kOk;
  }
};

struct LaplaceCmd {
  double k = 1.0;
  long n = 4;
  std::size_t nodes = 128;
  std::string out;

  int run() const {
    const discrete::LaguerreBasisSpec spec(k, n);
    const std::vector<cplx> points = {{1.0, 0.0}, {0.5, 1.0},  {2.0, -1.0}, {0.2, 0.3},  {3.0, 2.0},
                                      {1.0, -3.0}, {0.7, 0.1}, {5.0, 0.0},  {0.3, -1.5}, {1.5, 4.0}};
    const line::RPlusGrid grid(1e-3, 200.0, 64);
    json rows = json::array();
    double worst = 0.0;
    bool converged = true;
    for (long m = 0; m <= n; ++m) {
      const auto f = line::RPlusFunction::from_function(grid, [spec, m](double r) -> cplx {
        return discrete::laguerre_basis(spec, m, r);
      });
      for (const auto& w : points) {
        const discrete::HalfPlanePoint p(w);
        const auto t = discrete::laplace_transform(f, spec, p, {nodes});
        const cplx exact = discrete::halfplane_basis(spec, m, p);
        const double res = std::abs(t.value - exact);
        worst = std::max(worst, res);
        converged = converged && t.converged;
        rows.push_back({{"n", m}, {"w", {w.real(), w.imag()}}, {"residual", res}, {"converged", t.converged}});
      }
    }
    json j{{"k", k}, {"n", n}, {"nodes", nodes}, {"points", std::move(rows)}, {"max_residual", worst},
           {"converged", converged}};
    const std::string text = j.dump(2) + "\n";
    if (!out.empty()) io::write_file_atomic(out, text);
    print(text);
    return kOk;
  }
};

struct LineCwtCmd {
  std::string signal = "chirp", wavelet = "mexhat", out, reconstruction;
  ScaleOpts scales{0.01, 100.0, 200};
  double window = 40.0;
  std::size_t n_samples = 1024;

  int run() const {
    std::optional<line::LineSignal> f, g;
    const line::LineGrid grid(-window, window, n_samples);
    if (signal == "chirp") {
      f = line::LineSignal::from_function(
          grid, [](double x) { return std::exp(-x * x / 8.0) * std::polar(1.0, 5.0 * x + 0.25 * x * x); }, "chirp");
    } else {
      auto s = io::read_signal(signal);
      if (s.kind != io::GridKind::line) throw DomainError(signal + ": expected a line signal");
      f = *s.line;
    }
    if (wavelet == "mexhat") {
      g = line::mexican_hat(f->grid());
    } else {
      auto s = io::read_signal(wavelet);
      if (s.kind != io::GridKind::line) throw DomainError(wavelet + ": expected a line signal");
      g = *s.line;
    }
    const auto adm = line::line_admissibility(*g);
    json j{{"signal", f->label()}, {"wavelet", g->label()}, {"c_gamma", adm.c_gamma},
           {"hat_at_zero", adm.hat_at_zero}, {"admissible", adm.finite}};
    io::AtomicWriter w;
    if (adm.finite) {
      const auto sg = scales.grid();
      const auto S = line::line_analyze(*f, *g, sg);
      const auto rec = line::line_synthesize(S, *g, adm.c_gamma);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < rec.values().size(); ++i) {
        num += std::norm(rec.values()[i] - f->values()[i]);
        den += std::norm(f->values()[i]);
      }
      j["scales"] = {{"a_min", sg.a_min()}, {"a_max", sg.a_max()}, {"count", sg.size()}};
      j["roundtrip_error"] = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
      if (!reconstruction.empty()) io::stage_signal(w, reconstruction, rec);
    }
    const std::string text = j.dump(2) + "\n";
    if (!out.empty()) w.stage(out, text);
    w.commit();
    print(text);
    return adm.finite ? kOk : kNegative;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circlet: wavelets on the circle and the line from SL(2,R)"};
  app.fallthrough();  // global options may follow the subcommand
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for randomized inputs (random:BAND signals)")->capture_default_str();

  AdmissibilityCmd adm;
  auto* c_adm = app.add_subcommand("admissibility", "Lambda_n, weak condition and verdict for a circle wavelet");
  c_adm->add_option("--wavelet", adm.wavelet, "wavelet signal file (CSV + sidecar)");
  c_adm->add_option("--builtin", adm.builtin, "dog:ALPHA[:balanced] | gaussian | constant | mexhat");
  add_scale_opts(c_adm, adm.scales);
  c_adm->add_option("--n-max", adm.n_max, "largest |n| tested")->capture_default_str();
  c_adm->add_option("--n-samples", adm.n_samples, "grid size for builtin wavelets")->capture_default_str();
  c_adm->add_option("--out", adm.out, "report JSON");

  CwtCmd cwt;
  auto* c_cwt = app.add_subcommand("cwt", "scalogram of a circle signal");
  c_cwt->add_option("--signal", cwt.signal, "signal file or random:BAND | cos2 | zero")->required();
  c_cwt->add_option("--wavelet", cwt.wavelet, "wavelet file or builtin name")->required();
  add_scale_opts(c_cwt, cwt.scales);
  c_cwt->add_option("--n-angles", cwt.n_angles, "angle nodes (0: signal grid)")->capture_default_str();
  c_cwt->add_option("--n-samples", cwt.n_samples, "grid size for builtin signals")->capture_default_str();
  c_cwt->add_option("--out", cwt.out, "scalogram metadata JSON")->required();

  IcwtCmd icwt;
  auto* c_icwt = app.add_subcommand("icwt", "reconstruct a circle signal from its scalogram");
  c_icwt->add_option("--scalogram", icwt.scalogram, "scalogram metadata JSON")->required();
  c_icwt->add_option("--wavelet", icwt.wavelet, "wavelet file or builtin name")->required();
  c_icwt->add_option("--report", icwt.report, "admissibility report JSON")->required();
  c_icwt->add_option("--out", icwt.out, "reconstructed signal CSV")->required();
  c_icwt->add_option("--reference", icwt.reference, "original signal, to print the relative error");

  FrameCmd frame;
  auto* c_frame = app.add_subcommand("frame", "frame bounds c1 = inf Lambda, c2 = sup Lambda");
  c_frame->add_option("--wavelet", frame.wavelet, "wavelet signal file");
  c_frame->add_option("--builtin", frame.builtin, "builtin wavelet name");
  add_scale_opts(c_frame, frame.scales);
  c_frame->add_option("--n-max", frame.n_max, "largest |n| tested")->capture_default_str();
  c_frame->add_option("--n-samples", frame.n_samples, "grid size for builtin wavelets")->capture_default_str();
  c_frame->add_option("--out", frame.out, "JSON output");

  EuclidCmd eu;
  auto* c_eu = app.add_subcommand("euclid", "Euclidean-limit error against R for a bump");
  c_eu->add_option("--R-list", eu.r_list, "comma-separated radii")->capture_default_str();
  c_eu->add_option("--b", eu.b, "translation")->capture_default_str();
  c_eu->add_option("--a", eu.a, "dilation")->capture_default_str();
  c_eu->add_option("--support", eu.support, "bump half-width")->capture_default_str();
  c_eu->add_option("--window", eu.window, "line window half-width")->capture_default_str();
  c_eu->add_option("--n-samples", eu.n_samples, "line grid size")->capture_default_str();
  c_eu->add_option("--out", eu.out, "JSON output");

  LaguerreCmd lag;
  auto* c_lag = app.add_subcommand("laguerre", "orthonormality residuals of the Laguerre basis");
  c_lag->add_option("--k", lag.k, "Bargmann index (half-integer >= 1)")->capture_default_str();
  c_lag->add_option("--n-max", lag.n_max, "top mode")->capture_default_str();
  c_lag->add_option("--nodes", lag.nodes, "Gauss-Laguerre nodes")->capture_default_str();
  c_lag->add_option("--out", lag.out, "JSON output");

  LaplaceCmd lap;
  auto* c_lap = app.add_subcommand("laplace", "Laplace transform of phi_n^k against the half-plane basis");
  c_lap->add_option("--k", lap.k, "Bargmann index")->capture_default_str();
  c_lap->add_option("--n", lap.n, "modes 0..n")->capture_default_str();
  c_lap->add_option("--nodes", lap.nodes, "Gauss-Laguerre nodes")->capture_default_str();
  c_lap->add_option("--out", lap.out, "JSON output");

  LineCwtCmd lc;
  auto* c_lc = app.add_subcommand("line-cwt", "affine CWT round trip on the line");
  c_lc->add_option("--signal", lc.signal, "line signal file or 'chirp'")->capture_default_str();
  c_lc->add_option("--wavelet", lc.wavelet, "line wavelet file or 'mexhat'")->capture_default_str();
  add_scale_opts(c_lc, lc.scales);
  c_lc->add_option("--window", lc.window, "half-width of the builtin window")->capture_default_str();
  c_lc->add_option("--n-samples", lc.n_samples, "builtin grid size")->capture_default_str();
  c_lc->add_option("--reconstruction", lc.reconstruction, "write the reconstructed signal here");
  c_lc->add_option("--out", lc.out, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  cwt.seed = seed;
  try {
    if (c_adm->parsed()) return adm.run();
    if (c_cwt->parsed()) return cwt.run();
    if (c_icwt->parsed()) return icwt.run();
    if (c_frame->parsed()) return frame.run();
    if (c_eu->parsed()) return eu.run();
    if (c_lag->parsed()) return lag.run();
    if (c_lap->parsed()) return lap.run();
    if (c_lc->parsed()) return lc.run();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}

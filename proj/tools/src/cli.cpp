#include "catmap_cli/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "catmap/errors.hpp"
#include "catmap/heisenberg.hpp"
#include "catmap/spectral.hpp"
#include "catmap/theta.hpp"
#include "catmap/trace_formula.hpp"

namespace catmap::cli {

using catmap::to_json;
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::int64_t parse_int(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InputError("cannot read " + what + " from '" + raw + "'");
  }
  if (used != s.size()) throw InputError("cannot read " + what + " from '" + raw + "'");
  return v;
}

double parse_real(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("cannot read " + what + " from '" + raw + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw InputError("cannot read " + what + " from '" + raw + "'");
  return v;
}

// ---------------------------------------------------------------- reports

// One (g, N) job: a JSON document plus the same content as CSV rows.
struct Report {
  std::string stem;
  nlohmann::json json;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> violations;
};

std::string stem_for(const std::string& cmd, const IntegerSymplecticMatrix& g, std::int64_t N) {
  const auto [a, b, c, d] = g.entries2();
  std::ostringstream s;
  s << cmd << "_g" << a << '_' << b << '_' << c << '_' << d << "_N" << N;
  return s.str();
}

std::vector<std::string> g_cells(const IntegerSymplecticMatrix& g, std::int64_t N) {
  const auto [a, b, c, d] = g.entries2();
  return {std::to_string(a), std::to_string(b), std::to_string(c), std::to_string(d),
          std::to_string(N)};
}

const std::vector<std::string> kGHeader = {"a", "b", "c", "d", "N"};

std::vector<std::string> with_g(std::vector<std::string> tail) {
  std::vector<std::string> h = kGHeader;
  h.insert(h.end(), tail.begin(), tail.end());
  return h;
}

void check(Report& r, const std::string& name, double value, double tol) {
  if (!(value <= tol))
    r.violations.push_back(r.stem + ": " + name + " = " + format_double(value) + " exceeds " +
                           format_double(tol));
}

QuantizeOptions options_of(const RunConfig& cfg) {
  QuantizeOptions o;
  o.path = cfg.path;
  o.conventions = cfg.conventions;
  return o;
}

Report quantize_report(const RunConfig& cfg, const std::map<std::string, double>& tol,
                       const IntegerSymplecticMatrix& g, std::int64_t N) {
  const QuantizedMap q = quantize(g, N, options_of(cfg));
  Report r{stem_for("quantize", g, N), to_json(q, cfg.include_matrix), {}, {}, {}};
  r.csv_header = with_g({"construction", "unitarity_residual", "egorov_residual"});
  auto row = g_cells(g, N);
  row.insert(row.end(), {to_string(q.construction), format_double(q.U.unitarity_residual()),
                         format_double(q.egorov_residual)});
  r.rows.push_back(row);
  check(r, "unitarity_residual", q.U.unitarity_residual(), tol.at("unitarity"));
  check(r, "egorov_residual", q.egorov_residual, tol.at("egorov"));
  return r;
}

Report trace_report(const RunConfig& cfg, const std::map<std::string, double>& tol,
                    const IntegerSymplecticMatrix& g, std::int64_t N) {
  const TraceReport t = trace_compare(g, N, options_of(cfg));
  Report r{stem_for("trace", g, N), to_json(t), {}, {}, {}};
  r.json["conventions"] = to_json(cfg.conventions);
  r.csv_header = with_g({"formula_re", "formula_im", "direct_re", "direct_im", "magnitude_error",
                         "phase_ratio_re", "phase_ratio_im"});
  auto row = g_cells(g, N);
  const Complex ph = t.phase_discrepancy.value_or(Complex(NAN, NAN));
  row.insert(row.end(), {format_double(t.formula_value.real()), format_double(t.formula_value.imag()),
                         format_double(t.direct_value.real()), format_double(t.direct_value.imag()),
                         format_double(t.magnitude_error), format_double(ph.real()),
                         format_double(ph.imag())});
  r.rows.push_back(row);
  check(r, "magnitude_error", t.magnitude_error, tol.at("magnitude"));
  return r;
}

Report spectrum_report(const RunConfig& cfg, const std::map<std::string, double>& tol,
                       const IntegerSymplecticMatrix& g, std::int64_t N) {
  const SpectralReport s = spectral_report(quantize(g, N, options_of(cfg)));
  Report r{stem_for("spectrum", g, N), to_json(s), {}, {}, {}};
  r.csv_header = with_g({"index", "eigenphase"});
  for (std::size_t i = 0; i < s.eigenphases.size(); ++i) {
    auto row = g_cells(g, N);
    row.insert(row.end(), {std::to_string(i), format_double(s.eigenphases[i])});
    r.rows.push_back(row);
  }
  check(r, "max_eigen_residual", s.max_eigen_residual, tol.at("eigen_residual"));
  return r;
}

Report ergodic_report(const RunConfig& cfg, const std::map<std::string, double>& tol,
                      const IntegerSymplecticMatrix& g, std::int64_t N) {
  const double delta = 2 * kPi / static_cast<double>(N);
  const auto [m0, n0] = cfg.observable;
  const ErgodicityReport e = ergodicity_variance(quantize(g, N, options_of(cfg)), m0, n0,
                                                 {{0.0, delta}, {kPi, delta}, {0.0, 2.0}});
  Report r{stem_for("ergodic", g, N), to_json(e), {}, {}, {}};
  r.json["conventions"] = to_json(cfg.conventions);
  r.csv_header = with_g({"m0", "n0", "diagonal_variance", "ep_bang", "mp", "parseval_defect"});
  auto row = g_cells(g, N);
  row.insert(row.end(), {std::to_string(m0), std::to_string(n0), format_double(e.diagonal_variance),
                         format_double(e.offdiag_sums[0].value), format_double(e.offdiag_sums[1].value),
                         format_double(e.parseval_defect)});
  r.rows.push_back(row);
  check(r, "parseval_defect", e.parseval_defect, tol.at("parseval"));
  const double completeness = std::abs(e.offdiag_sums[2].value - (1.0 - e.diagonal_variance));
  check(r, "completeness_defect", completeness, tol.at("completeness"));
  return r;
}

Report period_report(const RunConfig& cfg, const std::map<std::string, double>& tol,
                     const IntegerSymplecticMatrix& g, std::int64_t N) {
  const QuantizedMap q = quantize(g, N, options_of(cfg));
  const QuantumPeriod p = quantum_period(q.U);
  const std::uint64_t arith = arithmetic_period(g, N);
  const std::uint64_t arith2 = arithmetic_period(g, 2 * N);
  nlohmann::json j = {{"g", to_json(g)},
                      {"N", N},
                      {"arithmetic_period", arith},
                      {"arithmetic_period_2N", arith2},
                      {"quantum_period", p.period ? nlohmann::json(*p.period) : nlohmann::json()},
                      {"scalar_phase", p.scalar_phase ? to_json(*p.scalar_phase) : nlohmann::json()},
                      {"residual", p.residual},
                      {"relation", p.period ? period_relation(*p.period, arith) : "none"},
                      {"conventions", to_json(q.conventions)}};
  Report r{stem_for("period", g, N), j, {}, {}, {}};
  r.csv_header = with_g({"arithmetic_period", "arithmetic_period_2N", "quantum_period", "relation"});
  auto row = g_cells(g, N);
  row.insert(row.end(), {std::to_string(arith), std::to_string(arith2),
                         p.period ? std::to_string(*p.period) : "", j.at("relation").get<std::string>()});
  r.rows.push_back(row);
  if (!p.period) r.violations.push_back(r.stem + ": no quantum period below the cap");
  check(r, "period_residual", p.residual, tol.at("period_residual"));
  return r;
}

std::vector<VerificationReport> theta_checks(std::int64_t N, Complex tau,
                                             const std::map<std::string, double>& tol) {
  std::vector<VerificationReport> out;
  const nlohmann::json params = {{"N", N}, {"tau", to_json(tau)}};
  auto add = [&](const std::string& name, double residual) {
    const double t = tol.at(name);
    out.push_back({name, params, residual, t, residual <= t});
  };
  double lattice = 0;
  for (std::int64_t mu = 0; mu < N; ++mu) {
    ThetaEvalParams p;
    p.tau = tau;
    p.N = N;
    p.mu = mu;
    lattice = std::max(lattice, lattice_invariance_residual(p, 16));
  }
  add("lattice_invariance", lattice);
  const ComplexMatrix gram = theta_gram(tau, tau, N) / gaussian_calibration_constant();
  add("inner_products",
      max_abs(gram - inner_product_closed_form(tau, tau, N) * ComplexMatrix::Identity(N, N)));
  const TransformationFit f = fit_transformation_law(IntegerSymplecticMatrix::S(), N, tau);
  // the fit carries the automorphy factor; rescale to the norm of a unitary
  const ComplexMatrix w = f.U / (f.U.norm() / std::sqrt(static_cast<double>(N)));
  add("s_transformation_fit",
      std::max(f.residual, phase_aligned_distance(w, quantize_S(N).matrix())));
  return out;
}

Report theta_report(const RunConfig& cfg, const std::map<std::string, double>& tol, std::int64_t N) {
  const auto checks = theta_checks(N, cfg.tau, tol);
  Report r;
  r.stem = "theta_N" + std::to_string(N);
  r.json = {{"N", N},
            {"tau", to_json(cfg.tau)},
            {"conventions", to_json(cfg.conventions)},
            {"checks", nlohmann::json::array()}};
  r.csv_header = {"N", "check", "residual", "tolerance", "pass"};
  for (const auto& c : checks) {
    r.json["checks"].push_back(to_json(c));
    r.rows.push_back({std::to_string(N), c.check, format_double(c.residual),
                      format_double(c.tolerance), c.pass ? "true" : "false"});
    check(r, c.check, c.residual, c.tolerance);
  }
  return r;
}

// ---------------------------------------------------------------- output

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += cells[i];
  }
  return s;
}

void write_reports(const std::vector<Report>& reports, const RunConfig& cfg, std::ostream& out) {
  if (!cfg.output.empty()) {
    std::filesystem::create_directories(cfg.output);
    for (const auto& r : reports) {
      const auto path = std::filesystem::path(cfg.output) /
                        (r.stem + (cfg.format == Format::kJson ? ".json" : ".csv"));
      std::ofstream f(path);
      if (!f) throw InputError("cannot write " + path.string());
      if (cfg.format == Format::kJson) {
        f << r.json.dump(2) << '\n';
      } else {
        f << csv_line(r.csv_header) << '\n';
        for (const auto& row : r.rows) f << csv_line(row) << '\n';
      }
    }
    return;
  }
  if (cfg.format == Format::kJson) {
    if (reports.size() == 1) {
      out << reports.front().json.dump(2) << '\n';
    } else {
      nlohmann::json all = nlohmann::json::array();
      for (const auto& r : reports) all.push_back(r.json);
      out << all.dump(2) << '\n';
    }
    return;
  }
  if (reports.empty()) return;
  out << csv_line(reports.front().csv_header) << '\n';
  for (const auto& r : reports)
    for (const auto& row : r.rows) out << csv_line(row) << '\n';
}

// ---------------------------------------------------------------- verify-all

std::vector<IntegerSymplecticMatrix> suite_matrices() {
  return {IntegerSymplecticMatrix::S(),         IntegerSymplecticMatrix::T(),
          IntegerSymplecticMatrix::sl2(1, 2, 0, 1), IntegerSymplecticMatrix::sl2(2, 1, 1, 1),
          IntegerSymplecticMatrix::sl2(1, 2, 1, 3), IntegerSymplecticMatrix::sl2(1, 1, 1, 2),
          IntegerSymplecticMatrix::sl2(3, 2, 1, 1), IntegerSymplecticMatrix::sl2(2, 3, 1, 2),
          IntegerSymplecticMatrix::sl2(0, 1, -1, -1), IntegerSymplecticMatrix::sl2(4, 1, 3, 1),
          IntegerSymplecticMatrix::sl2(1, 0, 2, 1)};
}

std::vector<std::int64_t> suite_grid(bool full) {
  std::vector<std::int64_t> grid;
  const std::int64_t dense = full ? 64 : 32;
  for (std::int64_t N = 1; N <= dense; ++N) grid.push_back(N);
  if (full)
    for (std::int64_t N : {96, 127, 128, 192, 251, 256, 257, 384, 509, 512}) grid.push_back(N);
  return grid;
}

class SuiteBuilder {
 public:
  SuiteBuilder(std::string name, double tol) { s_.name = std::move(name), s_.tolerance = tol; }
  void record(double value, const std::string& label) {
    ++s_.cases;
    s_.worst = std::max(s_.worst, value);
    if (!(value <= s_.tolerance)) {
      s_.pass = false;
      if (s_.failures.size() < 5) s_.failures.push_back(label + ": " + format_double(value));
    }
  }
  void fail(const std::string& label) { record(INFINITY, label); }
  SuiteResult done() { return std::move(s_); }

 private:
  SuiteResult s_;
};

std::string label(const IntegerSymplecticMatrix& g, std::int64_t N) {
  return g.to_string() + " N=" + std::to_string(N);
}

bool nondegenerate(const IntegerSymplecticMatrix& g) {
  return (IntegerMatrix::identity(2) - g.matrix()).determinant() != 0;
}

}  // namespace

// ---------------------------------------------------------------- public

std::string to_string(Command c) {
  switch (c) {
    case Command::kQuantize: return "quantize";
    case Command::kTrace: return "trace";
    case Command::kSpectrum: return "spectrum";
    case Command::kErgodic: return "ergodic";
    case Command::kThetaCheck: return "theta-check";
    case Command::kPeriodScan: return "period-scan";
    case Command::kVerifyAll: return "verify-all";
  }
  return "unknown";
}

IntegerSymplecticMatrix parse_matrix(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw InputError("g must be four comma-separated integers, got '" + text + "'");
  std::int64_t e[4];
  for (int i = 0; i < 4; ++i) e[i] = parse_int(parts[static_cast<std::size_t>(i)], "matrix entry");
  try {
    return IntegerSymplecticMatrix::sl2(e[0], e[1], e[2], e[3]);
  } catch (const Error& err) {
    throw InputError("g = [[" + std::to_string(e[0]) + "," + std::to_string(e[1]) + "],[" +
                     std::to_string(e[2]) + "," + std::to_string(e[3]) +
                     "]] is not symplectic: " + err.what());
  }
}

std::vector<std::int64_t> parse_grid(const std::string& text) {
  std::vector<std::int64_t> grid;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::int64_t lo = parse_int(text.substr(0, dots), "grid bound");
    const std::int64_t hi = parse_int(text.substr(dots + 2), "grid bound");
    if (hi < lo) throw InputError("empty grid '" + text + "'");
    for (std::int64_t n = lo; n <= hi; ++n) grid.push_back(n);
  } else {
    for (const auto& p : split(text, ',')) grid.push_back(parse_int(p, "N"));
  }
  if (grid.empty()) throw InputError("empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 1) throw InputError("N must be positive, got " + std::to_string(grid[i]));
    if (i > 0 && grid[i] <= grid[i - 1]) throw InputError("grid must be strictly increasing");
  }
  return grid;
}

std::pair<std::int64_t, std::int64_t> parse_pair(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InputError("expected 'm,n', got '" + text + "'");
  return {parse_int(parts[0], "observable"), parse_int(parts[1], "observable")};
}

Complex parse_tau(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw InputError("tau must be 're,im', got '" + text + "'");
  const Complex tau(parse_real(parts[0], "tau"), parse_real(parts[1], "tau"));
  if (!(tau.imag() > 0)) throw InputError("tau must lie in the upper half-plane");
  return tau;
}

std::pair<std::string, double> parse_tolerance(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw InputError("tolerance must be name=value");
  const double v = parse_real(text.substr(eq + 1), "tolerance");
  if (!(v > 0)) throw InputError("tolerances must be positive");
  return {trim(text.substr(0, eq)), v};
}

std::map<std::string, double> default_tolerances(Command c) {
  switch (c) {
    case Command::kQuantize: return {{"unitarity", 1e-10}, {"egorov", 1e-10}};
    case Command::kTrace: return {{"magnitude", 1e-10}};
    case Command::kSpectrum: return {{"eigen_residual", 1e-8}};
    case Command::kErgodic: return {{"parseval", 1e-10}, {"completeness", 1e-10}};
    case Command::kThetaCheck:
      return {{"lattice_invariance", 1e-10}, {"inner_products", 1e-6}, {"s_transformation_fit", 1e-6}};
    case Command::kPeriodScan: return {{"period_residual", 1e-8}};
    case Command::kVerifyAll: return {};
  }
  return {};
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CATMAP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

nlohmann::json to_json(const SuiteResult& s) {
  return {{"suite", s.name},     {"pass", s.pass},   {"worst", s.worst},
          {"tolerance", s.tolerance}, {"cases", s.cases}, {"failures", s.failures}};
}

std::vector<SuiteResult> verify_all(bool full, const Conventions& conv,
                                    const std::vector<IntegerSymplecticMatrix>& extra) {
  const std::vector<std::int64_t> grid = suite_grid(full);
  std::vector<IntegerSymplecticMatrix> mats = suite_matrices();
  mats.insert(mats.end(), extra.begin(), extra.end());
  QuantizeOptions opts;
  opts.conventions = conv;
  std::vector<SuiteResult> out;

  {
    SuiteBuilder s("gauss_sum", 1e-12);
    for (std::int64_t N = 1; N <= 256; ++N) {
      const GaussSum g = gauss_sum(N);
      s.record(std::abs(g.direct - g.closed_form), "N=" + std::to_string(N));
    }
    out.push_back(s.done());
  }
  {
    SuiteBuilder s("weyl_projective_representation", 1e-12);
    for (std::int64_t N : grid) {
      if (N > 32) break;
      std::vector<WeylPair> pairs;
      for (std::int64_t a = -2; a <= 3; ++a)
        for (std::int64_t b = -1; b <= 2; ++b) pairs.push_back({{a, b}, {b + 1, a - 1}});
      s.record(projective_rep_check(N, pairs, conv), "N=" + std::to_string(N));
    }
    out.push_back(s.done());
  }
  {
    SuiteBuilder s("coset_enumeration", 0.0);
    for (const auto& g : mats) {
      if (!nondegenerate(g)) continue;
      const IntegerMatrix m = g.matrix() - IntegerMatrix::identity(2);
      const CosetSystem cs(m);
      const auto reps = cs.representatives();
      bool ok = BigInt(reps.size()) == cs.index();
      for (std::size_t i = 0; ok && i < reps.size(); ++i)
        for (std::size_t j = i + 1; ok && j < reps.size(); ++j) ok = !cs.congruent(reps[i], reps[j]);
      s.record(ok ? 0.0 : 1.0, g.to_string());
    }
    out.push_back(s.done());
  }
  {
    SuiteBuilder s("generator_words", 0.0);
    for (const auto& g : mats)
      s.record(word_product(generator_decomposition(g)) == g ? 0.0 : 1.0, g.to_string());
    out.push_back(s.done());
  }

  // per (g, N): the default construction feeds unitarity, Egorov and trace;
  // the generator word is checked for Egorov as well, since only it exercises
  // every convention constant
  struct Cell {
    double unitarity = INFINITY, egorov = INFINITY, word_egorov = INFINITY;
    double trace = -1;  // < 0: degenerate map, not checked
    std::string error;
  };
  QuantizeOptions word_opts = opts;
  word_opts.path = QuantizeOptions::Path::kGeneratorWord;
  std::vector<std::pair<std::size_t, std::int64_t>> jobs;
  for (std::size_t i = 0; i < mats.size(); ++i)
    for (std::int64_t N : grid) jobs.emplace_back(i, N);
  const auto cells = parallel_map<Cell>(jobs.size(), [&](std::size_t k) {
    const auto& [i, N] = jobs[k];
    Cell c;
    try {
      c.word_egorov = quantize(mats[i], N, word_opts).egorov_residual;
      const QuantizedMap q = quantize(mats[i], N, opts);
      c.unitarity = q.U.unitarity_residual();
      c.egorov = q.egorov_residual;
      if (nondegenerate(mats[i])) c.trace = trace_compare(q).magnitude_error;
    } catch (const Error& e) {
      c.error = e.what();
    }
    return c;
  });
  {
    SuiteBuilder u("unitarity", 1e-10), e("egorov", 1e-10), t("trace_magnitude", 1e-10);
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      const Cell& c = cells[k];
      std::string l = label(mats[jobs[k].first], jobs[k].second);
      if (!c.error.empty()) l += " (" + c.error + ")";
      u.record(c.unitarity, l);
      e.record(std::max(c.egorov, c.word_egorov), l);
      if (c.trace >= 0 || !c.error.empty()) t.record(c.error.empty() ? c.trace : INFINITY, l);
    }
    out.push_back(u.done());
    out.push_back(e.done());
    out.push_back(t.done());
  }
  {
    SuiteBuilder s("fourier_spectrum", 1e-8);
    for (std::int64_t N : grid) {
      if (N > 64) break;
      const EigenDecomposition e = eig_unitary(quantize_S(N));
      double worst = 0;
      for (double p : e.phases) {
        const double k = std::round(p / (kPi / 2));
        worst = std::max(worst, std::abs(std::polar(1.0, p) - std::polar(1.0, k * kPi / 2)));
      }
      s.record(worst, "N=" + std::to_string(N));
    }
    out.push_back(s.done());
  }
  {
    const auto tol = default_tolerances(Command::kThetaCheck);
    SuiteBuilder li("theta_lattice_invariance", tol.at("lattice_invariance"));
    SuiteBuilder ip("theta_inner_products", tol.at("inner_products"));
    SuiteBuilder sf("s_transformation_fit", tol.at("s_transformation_fit"));
    for (std::int64_t N = 1; N <= 4; ++N)
      for (Complex tau : {Complex(0, 1), Complex(1, 2), Complex(0, 2)})
        for (const auto& c : theta_checks(N, tau, tol)) {
          const std::string l = "N=" + std::to_string(N) + " tau=" + format_double(tau.real()) +
                                "+" + format_double(tau.imag()) + "i";
          if (c.check == "lattice_invariance") li.record(c.residual, l);
          if (c.check == "inner_products") ip.record(c.residual, l);
          if (c.check == "s_transformation_fit") sf.record(c.residual, l);
        }
    out.push_back(li.done());
    out.push_back(ip.done());
    out.push_back(sf.done());
  }
  {
    SuiteBuilder s("parseval", 1e-10);
    const auto cat = IntegerSymplecticMatrix::sl2(2, 1, 1, 1);
    const auto defects = parallel_map<double>(grid.size(), [&](std::size_t k) {
      try {
        return ergodicity_variance(quantize(cat, grid[k], opts), 1, 0).parseval_defect;
      } catch (const Error&) {
        return static_cast<double>(INFINITY);
      }
    });
    for (std::size_t k = 0; k < grid.size(); ++k) s.record(defects[k], "N=" + std::to_string(grid[k]));
    out.push_back(s.done());
  }
  {
    SuiteBuilder s("quantum_period", 1e-8);
    for (const auto& g : mats)
      for (std::int64_t N : grid) {
        if (N > 32) break;
        try {
          const QuantumPeriod p = quantum_period(quantize(g, N, opts).U);
          if (!p.period) s.fail(label(g, N));
          else s.record(p.residual, label(g, N));
        } catch (const Error& e) {
          s.fail(label(g, N) + " (" + e.what() + ")");
        }
      }
    out.push_back(s.done());
  }
  return out;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    std::map<std::string, double> tol = default_tolerances(cfg.command);
    for (const auto& [k, v] : cfg.tolerances) {
      if (!tol.count(k)) throw InputError("unknown tolerance '" + k + "' for " + to_string(cfg.command));
      tol[k] = v;
    }

    if (cfg.command == Command::kVerifyAll) {
      const auto suites = verify_all(cfg.full, cfg.conventions, cfg.g);
      bool pass = true;
      nlohmann::json j = {{"level", cfg.full ? "full" : "quick"},
                          {"conventions", to_json(cfg.conventions)},
                          {"suites", nlohmann::json::array()}};
      Report r;
      r.stem = std::string("verify_all_") + (cfg.full ? "full" : "quick");
      r.csv_header = {"suite", "pass", "worst", "tolerance", "cases"};
      for (const auto& s : suites) {
        pass = pass && s.pass;
        j["suites"].push_back(to_json(s));
        r.rows.push_back({s.name, s.pass ? "true" : "false", format_double(s.worst),
                          format_double(s.tolerance), std::to_string(s.cases)});
        if (!s.pass) {
          err << "suite " << s.name << " failed";
          if (!s.failures.empty()) err << " (" << s.failures.front() << ")";
          err << '\n';
        }
      }
      j["pass"] = pass;
      r.json = j;
      write_reports({r}, cfg, out);
      return pass ? kExitOk : kExitNumerical;
    }

    if (cfg.command != Command::kThetaCheck && cfg.g.size() != 1)
      throw InputError(to_string(cfg.command) + " needs exactly one --g");
    if (cfg.N.empty()) throw InputError("--N is required");

    std::vector<Report> reports;
    if (cfg.command == Command::kThetaCheck) {
      reports = parallel_map<Report>(cfg.N.size(),
                                     [&](std::size_t k) { return theta_report(cfg, tol, cfg.N[k]); });
    } else {
      const IntegerSymplecticMatrix& g = cfg.g.front();
      if (cfg.command == Command::kTrace && !nondegenerate(g))
        throw InputError("trace needs det(I - g) != 0; g = " + g.to_string() + " has eigenvalue 1");
      for (std::int64_t N : cfg.N)
        for (const auto& w : parity_warnings(g, N)) {
          if (cfg.strict_theta) {
            err << "error: N=" << N << ": " << w << '\n';
            return kExitParity;
          }
          err << "warning: N=" << N << ": " << w << '\n';
        }
      using Builder = Report (*)(const RunConfig&, const std::map<std::string, double>&,
                                 const IntegerSymplecticMatrix&, std::int64_t);
      Builder build = nullptr;
      switch (cfg.command) {
        case Command::kQuantize: build = quantize_report; break;
        case Command::kTrace: build = trace_report; break;
        case Command::kSpectrum: build = spectrum_report; break;
        case Command::kErgodic: build = ergodic_report; break;
        case Command::kPeriodScan: build = period_report; break;
        default: throw InputError("unsupported command");
      }
      reports = parallel_map<Report>(cfg.N.size(),
                                     [&](std::size_t k) { return build(cfg, tol, g, cfg.N[k]); });
    }
    write_reports(reports, cfg, out);
    bool ok = true;
    for (const auto& r : reports)
      for (const auto& v : r.violations) {
        ok = false;
        err << "violation: " << v << '\n';
      }
    return ok ? kExitOk : kExitNumerical;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const NotSymplecticError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const DegenerateMapError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantized symplectic torus maps: build, trace, analyse, verify", "catmap"};
  app.require_subcommand(1);

  std::string g_text, n_text, format = "json", output, observable = "1,0", tau = "0,1", path = "auto";
  std::vector<std::string> g_list, tolerances;
  bool strict = false, quick = false, full = false, matrix = false;
  std::string fault;

  auto common = [&](CLI::App* sub, bool needs_g) {
    auto* go = sub->add_option("--g", g_text, "matrix entries a,b,c,d (row-major)");
    if (needs_g) go->required();
    sub->add_option("--N", n_text, "grid: lo..hi or n1,n2,...")->required();
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--output", output, "directory for one report file per (g, N)");
    sub->add_option("--tol", tolerances, "name=value overrides of asserted tolerances");
    sub->add_flag("--strict-theta", strict, "treat theta-parity warnings as errors (exit 3)");
  };

  auto* q = app.add_subcommand("quantize", "build U_{g,N} and check unitarity and Egorov");
  common(q, true);
  q->add_option("--path", path, "construction")->check(CLI::IsMember({"auto", "law", "word", "intertwiner"}));
  q->add_flag("--include-matrix", matrix, "embed the matrix in JSON reports");
  auto* t = app.add_subcommand("trace", "coset-sum trace formula against the direct trace");
  common(t, true);
  auto* s = app.add_subcommand("spectrum", "eigenphases, multiplicities and quantum period");
  common(s, true);
  auto* e = app.add_subcommand("ergodic", "diagonal and off-diagonal matrix-element statistics");
  common(e, true);
  e->add_option("--observable", observable, "Weyl observable m0,n0");
  auto* th = app.add_subcommand("theta-check", "theta-function lattice, inner-product and fit checks");
  th->add_option("--N", n_text, "grid: lo..hi or n1,n2,...")->required();
  th->add_option("--tau", tau, "re,im");
  th->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  th->add_option("--output", output, "directory for report files");
  th->add_option("--tol", tolerances, "name=value overrides of asserted tolerances");
  auto* p = app.add_subcommand("period-scan", "arithmetic and quantum periods over an N grid");
  common(p, true);
  auto* v = app.add_subcommand("verify-all", "run every invariant suite");
  auto* qf = v->add_flag("--quick", quick, "N <= 32 (default)");
  v->add_flag("--full", full, "N <= 512")->excludes(qf);
  v->add_option("--g", g_list, "additional matrices a,b,c,d to include");
  v->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  v->add_option("--output", output, "directory for the summary file");
  v->add_option("--inject-fault", fault, "test fixture: corrupt a conventions constant")
      ->check(CLI::IsMember({"t-phase"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  RunConfig cfg;
  try {
    if (*q) cfg.command = Command::kQuantize;
    else if (*t) cfg.command = Command::kTrace;
    else if (*s) cfg.command = Command::kSpectrum;
    else if (*e) cfg.command = Command::kErgodic;
    else if (*th) cfg.command = Command::kThetaCheck;
    else if (*p) cfg.command = Command::kPeriodScan;
    else cfg.command = Command::kVerifyAll;

    if (!g_text.empty()) cfg.g.push_back(parse_matrix(g_text));
    for (const auto& x : g_list) cfg.g.push_back(parse_matrix(x));
    if (!n_text.empty()) cfg.N = parse_grid(n_text);
    cfg.observable = parse_pair(observable);
    if (cfg.observable == std::pair<std::int64_t, std::int64_t>{0, 0})
      throw InputError("the observable (0,0) is the identity");
    cfg.tau = parse_tau(tau);
    for (const auto& x : tolerances) cfg.tolerances.insert(parse_tolerance(x));
    cfg.format = format == "csv" ? Format::kCsv : Format::kJson;
    cfg.output = output;
    cfg.strict_theta = strict;
    cfg.full = full;
    cfg.include_matrix = matrix;
    using Path = QuantizeOptions::Path;
    cfg.path = path == "law" ? Path::kTransformationLaw
             : path == "word" ? Path::kGeneratorWord
             : path == "intertwiner" ? Path::kIntertwiner
                                     : Path::kAuto;
    if (fault == "t-phase") cfg.conventions.t_phase = TPhase::kFull;
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitInvalidInput;
  }
  return run(cfg, out, err);
}

}  // namespace catmap::cli

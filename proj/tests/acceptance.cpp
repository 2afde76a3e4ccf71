// Acceptance run: one PASS/FAIL line per criterion, followed by indented
// detail lines. Exit status is the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "catmap/quantizer.hpp"
#include "catmap/spectral.hpp"
#include "catmap/symplectic.hpp"
#include "catmap/theta.hpp"
#include "catmap/trace_formula.hpp"
#include "oracles.hpp"

using namespace catmap;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures++ < 12) notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
  int failures = 0;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string sci(double x) { return fmt("%.3e", x); }

bool nondegenerate(const IntegerSymplecticMatrix& g) {
  return (IntegerMatrix::identity(2) - g.matrix()).determinant() != 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ||a - c b||_max minimized over unit scalars c, with c read off the largest entry.
double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::Index r = 0, c = 0;
  b.cwiseAbs().maxCoeff(&r, &c);
  Complex ph = a(r, c) / b(r, c);
  ph /= std::abs(ph);
  return max_abs(a - ph * b);
}

// 1. Gauss sums.
Outcome gauss_sums() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (std::int64_t N = 1; N <= 256; ++N) {
    const GaussSum g = gauss_sum(N);
    worst = std::max(worst, std::abs(g.direct - g.closed_form));
    worst = std::max(worst, std::abs(g.direct - oracle::gauss_sum_direct(N)));
  }
  const double t = seconds_since(t0);
  o.require(worst <= 1e-12, "max |direct - closed form| = " + sci(worst) + " > 1e-12");
  o.require(t < 1.0, "runtime " + fmt("%.3f", t) + " s >= 1 s");
  o.note("N = 1..256, max error " + sci(worst) + ", " + fmt("%.3f", t) + " s");
  return o;
}

// 2. Unitarity and Egorov on the ten matrices, N = 2..256.
Outcome unitarity_egorov() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_u = 0, worst_e = 0;
  std::map<std::string, int> constructions;
  for (const auto& g : oracle::test_matrices())
    for (std::int64_t N = 2; N <= 256; ++N) {
      const QuantizedMap q = quantize(g, N);
      worst_u = std::max(worst_u, q.U.unitarity_residual());
      worst_e = std::max(worst_e, q.egorov_residual);
      ++constructions[to_string(q.construction)];
      o.require(q.U.unitarity_residual() <= 1e-10 && q.egorov_residual <= 1e-10,
                g.to_string() + " N=" + std::to_string(N));
    }
  const double t = seconds_since(t0);
  o.require(t < 120.0, "runtime " + fmt("%.1f", t) + " s >= 120 s");
  o.note("unitarity " + sci(worst_u) + ", Egorov " + sci(worst_e) + ", " + fmt("%.1f", t) + " s");
  std::string c = "constructions:";
  for (const auto& [k, v] : constructions) c += " " + k + "=" + std::to_string(v);
  o.note(c);
  return o;
}

// 3. Trace formula against direct traces.
Outcome trace_formula() {
  Outcome o;
  const Complex cal = trace_calibration();
  double worst_mag[2] = {0, 0};
  for (const auto& g : oracle::test_matrices()) {
    if (!nondegenerate(g)) continue;
    std::optional<Complex> first, first_par[2];
    double spread = 0, spread_par[2] = {0, 0};
    for (std::int64_t N = 2; N <= 256; ++N) {
      const TraceReport r = trace_compare(g, N);
      const int par = static_cast<int>(N % 2);
      worst_mag[par] = std::max(worst_mag[par], r.magnitude_error);
      o.require(r.magnitude_error <= 1e-8,
                "| |formula| - |Tr| | = " + sci(r.magnitude_error) + " for " + g.to_string() +
                    " N=" + std::to_string(N));
      if (!r.phase_discrepancy) continue;
      const Complex x = *r.phase_discrepancy / cal;
      if (!first) first = x;
      if (!first_par[par]) first_par[par] = x;
      spread = std::max(spread, std::abs(x - *first));
      spread_par[par] = std::max(spread_par[par], std::abs(x - *first_par[par]));
    }
    o.require(spread <= 1e-8, "phase ratio of " + g.to_string() + " varies across N by " + sci(spread));
    std::string line = g.to_string() + ": ratio spread " + sci(spread) + " (even N " +
                       sci(spread_par[0]) + ", odd N " + sci(spread_par[1]) + ")";
    if (first_par[0] && first_par[1])
      line += ", even/odd ratio arg " +
              fmt("%.4f", std::arg(*first_par[1] / *first_par[0]) / kPi) + " pi";
    o.note(line);
  }
  const auto arnold = IntegerSymplecticMatrix::sl2(2, 1, 1, 1);
  double worst_arnold = 0;
  for (std::int64_t N = 2; N <= 256; ++N)
    worst_arnold = std::max(worst_arnold, std::abs(std::abs(quantize(arnold, N).U.matrix().trace()) - 1.0));
  o.require(worst_arnold <= 1e-10, "| |Tr U| - 1 | for the Arnold map = " + sci(worst_arnold));
  o.note("magnitude error: even N " + sci(worst_mag[0]) + ", odd N " + sci(worst_mag[1]) +
         "; Arnold | |Tr| - 1 | " + sci(worst_arnold));
  return o;
}

// 4. Spectrum of the finite Fourier transform.
Outcome fourier_spectrum() {
  Outcome o;
  const Complex targets[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  double worst = 0;
  for (std::int64_t N = 1; N <= 64; ++N) {
    const EigenDecomposition e = eig_unitary(quantize_S(N));
    std::size_t count[4] = {0, 0, 0, 0};
    for (double th : e.phases) {
      const Complex z = std::polar(1.0, th);
      std::size_t best = 0;
      for (std::size_t k = 1; k < 4; ++k)
        if (std::abs(z - targets[k]) < std::abs(z - targets[best])) best = k;
      worst = std::max(worst, std::abs(z - targets[best]));
      ++count[best];
    }
    const auto [lo, hi] = std::minmax_element(count, count + 4);
    o.require(*hi - *lo <= 1, "multiplicities at N=" + std::to_string(N) + " differ by " +
                                  std::to_string(*hi - *lo));
  }
  o.require(worst <= 1e-8, "eigenvalue distance from {+-1, +-i} = " + sci(worst));
  o.note("N = 1..64, max distance " + sci(worst));
  return o;
}

// 5. Theta inner products against the closed form.
Outcome theta_inner_products() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Complex c = gaussian_calibration_constant();
  const std::vector<Complex> taus = {Complex(0, 1), Complex(1, 2), Complex(0, 2)};
  double worst = 0;
  for (std::int64_t N = 1; N <= 4; ++N)
    for (Complex tau : taus)
      for (Complex tau2 : taus) {
        const ComplexMatrix g = theta_gram(tau, tau2, N) / c;
        const Complex closed = inner_product_closed_form(tau, tau2, N);
        const double err = max_abs(g - closed * ComplexMatrix::Identity(N, N));
        worst = std::max(worst, err);
      }
  const double t = seconds_since(t0);
  o.require(worst <= 1e-6, "max |quadrature / c - closed form| = " + sci(worst));
  o.require(t < 60.0, "runtime " + fmt("%.1f", t) + " s >= 60 s");
  o.note("N <= 4, all tau pairs, max error " + sci(worst) + ", c = " +
         fmt("%.15f", c.real()) + ", " + fmt("%.2f", t) + " s");
  return o;
}

// 6. Fitted theta transformation matrix for S against the Fourier matrix.
Outcome transformation_bridge() {
  Outcome o;
  double worst = 0;
  for (std::int64_t N = 1; N <= 4; ++N) {
    const TransformationFit f = fit_transformation_law(IntegerSymplecticMatrix::S(), N, Complex(0, 1));
    const double d = phase_aligned_distance(f.U, quantize_S(N).matrix());
    worst = std::max(worst, d);
    o.require(d <= 1e-6, "N=" + std::to_string(N) + " distance " + sci(d));
    if (f.nu)
      o.note("N=" + std::to_string(N) + ": |nu| = " + fmt("%.12f", std::abs(*f.nu)) +
             ", fit residual " + sci(f.residual));
  }
  o.note("max phase-aligned distance " + sci(worst));
  return o;
}

// 7. Weyl-sum bounds and the period of S.
Outcome equidistribution() {
  Outcome o;
  std::size_t checked = 0;
  double tightest = 0;  // largest |Tr U^k| / bound
  for (const auto& g : oracle::test_matrices()) {
    if (!is_hyperbolic(g)) continue;
    double bound[5];
    IntegerSymplecticMatrix gk = g;
    for (int k = 1; k <= 4; ++k) {
      const auto det = (IntegerMatrix::identity(2) - gk.matrix()).determinant();
      bound[k] = std::sqrt(std::abs(static_cast<double>(to_i64(det))));
      gk = gk * g;
    }
    for (std::int64_t N = 2; N <= 256; ++N) {
      const ComplexMatrix u = quantize(g, N).U.matrix();
      const ComplexMatrix u2 = u * u;
      const Complex tr[5] = {0.0, u.trace(), u2.trace(), (u2.transpose().cwiseProduct(u)).sum(),
                             (u2.transpose().cwiseProduct(u2)).sum()};
      for (int k = 1; k <= 4; ++k) {
        ++checked;
        tightest = std::max(tightest, std::abs(tr[k]) / bound[k]);
        o.require(std::abs(tr[k]) <= bound[k] + 1e-9,
                  g.to_string() + " k=" + std::to_string(k) + " N=" + std::to_string(N));
      }
    }
  }
  o.note(std::to_string(checked) + " (g, k, N) triples, max |Tr U^k| / sqrt|det(I - g^k)| = " +
         fmt("%.12f", tightest));
  std::uint64_t longest = 0;
  for (std::int64_t N = 1; N <= 64; ++N) {
    const QuantumPeriod p = quantum_period(quantize(IntegerSymplecticMatrix::S(), N).U, 8);
    o.require(p.period && *p.period <= 4, "quantum period of S at N=" + std::to_string(N));
    if (p.period) longest = std::max(longest, *p.period);
  }
  o.note("S: longest quantum period for N <= 64 is " + std::to_string(longest));
  return o;
}

// 8. Quantum ergodicity trend for the Arnold map.
Outcome ergodicity() {
  Outcome o;
  const auto g = IntegerSymplecticMatrix::sl2(2, 1, 1, 1);
  std::vector<double> variances;
  for (std::int64_t N = 8; N <= 512; N *= 2) {
    const double d = 2 * kPi / static_cast<double>(N);
    const ErgodicityReport r = ergodicity_variance(quantize(g, N), 1, 0, {{0.0, d}, {kPi, d}, {0.0, 2.0}});
    variances.push_back(r.diagonal_variance);
    o.require(r.parseval_defect <= 1e-10, "Parseval defect " + sci(r.parseval_defect) +
                                              " at N=" + std::to_string(N));
    const double complete = 1.0 - r.diagonal_variance;
    const double all = r.offdiag_sums[2].value;
    o.require(std::abs(all - complete) <= 1e-10,
              "delta = 2 sum differs from 1 - diagonal by " + sci(std::abs(all - complete)));
    o.note("N=" + std::to_string(N) + ": EP " + sci(r.diagonal_variance) + ", EP! " +
           sci(r.offdiag_sums[0].value) + ", MP " + sci(r.offdiag_sums[1].value) +
           ", Parseval " + sci(r.parseval_defect));
  }
  o.require(variances.back() < variances.front(), "variance at N=512 not below N=8");
  o.note("fraction of decreasing steps " + fmt("%.3f", decreasing_fraction(variances)));
  return o;
}

// 9. Brute-force oracles.
Outcome brute_force() {
  Outcome o;
  std::size_t matrices = 0;
  for (std::int64_t a = -4; a <= 4; ++a)
    for (std::int64_t b = -4; b <= 4; ++b)
      for (std::int64_t c = -3; c <= 3; ++c)
        for (std::int64_t d = -3; d <= 3; ++d) {
          const IntegerMatrix m = IntegerMatrix{{a, b}, {c, d}};
          const BigInt det = m.determinant();
          if (det == 0 || abs(det) > 64) continue;
          ++matrices;
          const CosetSystem cs(m);
          const auto reps = cs.representatives();
          std::set<std::vector<BigInt>> keys;
          for (const auto& r : reps) keys.insert(oracle::coset_key(m, r));
          const bool ok = reps.size() == oracle::coset_count_by_box(m) && keys.size() == reps.size();
          o.require(ok, "cosets of " + m.to_string());
        }
  o.note(std::to_string(matrices) + " matrices with |det| <= 64 against box enumeration");

  std::size_t periods = 0;
  for (const auto& g : oracle::test_matrices())
    for (std::int64_t N = 1; N <= 32; ++N) {
      const QuantizedMap q = quantize(g, N);
      const QuantumPeriod p = quantum_period(q.U);
      const std::uint64_t expected = oracle::first_scalar_power(q.U.matrix(), 2000);
      o.require(p.period && *p.period == expected,
                "quantum period of " + g.to_string() + " N=" + std::to_string(N));
      ++periods;
    }
  o.note(std::to_string(periods) + " quantum periods against power iteration");

  std::mt19937_64 rng(2024);
  std::size_t words = 0;
  auto check_word = [&](const IntegerSymplecticMatrix& g) {
    ++words;
    o.require(word_product(generator_decomposition(g)) == g, "word of " + g.to_string());
  };
  for (const auto& g : oracle::test_matrices()) check_word(g);
  for (int i = 0; i < 500; ++i) check_word(oracle::random_sl2(rng, 1 + i % 40));
  o.note(std::to_string(words) + " generator words multiplied back");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Gauss-sum identity", gauss_sums},
      {"unitarity and exact Egorov", unitarity_egorov},
      {"trace formula", trace_formula},
      {"Fourier spectrum", fourier_spectrum},
      {"theta inner products", theta_inner_products},
      {"transformation-law bridge", transformation_bridge},
      {"equidistribution bounds", equidistribution},
      {"quantum ergodicity trend", ergodicity},
      {"brute-force oracles", brute_force},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                seconds_since(t0));
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    if (o.failures > 12) std::printf("    ... %d violations in total\n", o.failures);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed;
}

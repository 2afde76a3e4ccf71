#include "catmap/trace_formula.hpp"

#include <cmath>
#include <numbers>

#include "catmap/errors.hpp"

namespace catmap {
namespace {

constexpr double kPi = std::numbers::pi;

using RationalVector = std::vector<BigRational>;

// Solves (I - g) v = w exactly.
RationalVector solve_i_minus_g(const IntegerMatrix& i_minus_g, const IntVector& w) {
  const std::size_t k = i_minus_g.rows();
  std::vector<RationalVector> a(k, RationalVector(k + 1));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = BigRational(i_minus_g(i, j));
    a[i][k] = BigRational(w[i]);
  }
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && a[piv][col] == 0) ++piv;
    if (piv == k) throw DegenerateMapError("I - g is singular");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const BigRational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  RationalVector v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = a[i][k] / a[i][i];
  return v;
}

// exp(i pi q) for rational q, reduced mod 2 exactly first.
Complex exp_i_pi(const BigRational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  const BigInt r = mod_floor(num, 2 * den);
  // r / den lies in [0, 2); convert the small reduced fraction
  const double angle =
      kPi * static_cast<double>(BigRational(r, den).convert_to<long double>());
  if (r == 0) return {1.0, 0.0};
  if (r == den) return {-1.0, 0.0};
  return std::polar(1.0, angle);
}

IntegerMatrix i_minus(const IntegerSymplecticMatrix& g) {
  return IntegerMatrix::identity(g.matrix().rows()) - g.matrix();
}

}  // namespace

Complex trace_summand(const IntegerSymplecticMatrix& g, std::int64_t N, const IntVector& w,
                      const Conventions& conv) {
  const IntegerMatrix im = i_minus(g);
  const std::size_t n = g.half_dimension();
  if (w.size() != 2 * n) throw DimensionError("coset vector has the wrong length");
  const RationalVector v = solve_i_minus_g(im, w);
  // w = (x_w, xi_w) = (m, n); sigma(w, v) = <xi_w, x_v> - <xi_v, x_w>
  BigRational sigma = 0;
  BigInt mn = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sigma += BigRational(w[n + i]) * v[i] - v[n + i] * BigRational(w[i]);
    mn += w[i] * w[n + i];
  }
  sigma *= conv.sigma_sign;
  const BigInt det = boost::multiprecision::abs(im.determinant());
  if (N % 2 != 0 && det % 2 != 0) {
    // N/2 has no meaning mod 1 here; sigma has denominator det, so halve it
    // with the inverse of 2 mod det instead. Equals the literal reading at even N
    // and is the only variant found that is constant on cosets for odd N.
    const BigInt half = (det + 1) / 2;
    return exp_i_pi(BigRational(-2 * N) * BigRational(half) * sigma);
  }
  const BigRational exponent = BigRational(N) * (BigRational(mn) - sigma);
  return exp_i_pi(exponent);
}

Complex trace_theorem_E(const IntegerSymplecticMatrix& g, std::int64_t N,
                        const Conventions& conv) {
  if (N < 1) throw ParameterError("N must be positive");
  const IntegerMatrix im = i_minus(g);
  const BigInt det = im.determinant();
  if (det == 0)
    throw DegenerateMapError("I - g is singular for g = " + g.to_string() +
                             " (g has eigenvalue 1)");
  const CosetSystem cosets = coset_representatives(g.matrix() - IntegerMatrix::identity(im.rows()));
  Complex sum{0.0, 0.0};
  for (const IntVector& w : cosets.representatives()) sum += trace_summand(g, N, w, conv);
  const Complex root = std::sqrt(Complex(static_cast<double>(det), 0.0));
  return sum / root;
}

double coset_independence_defect(const IntegerSymplecticMatrix& g, std::int64_t N,
                                 const Conventions& conv) {
  const IntegerMatrix m = g.matrix() - IntegerMatrix::identity(g.matrix().rows());
  const CosetSystem cosets = coset_representatives(m);
  double worst = 0.0;
  for (const IntVector& w : cosets.representatives()) {
    const Complex base = trace_summand(g, N, w, conv);
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (int s : {-1, 1}) {
        IntVector shifted = w;
        for (std::size_t i = 0; i < m.rows(); ++i) shifted[i] += s * m(i, j);
        worst = std::max(worst, std::abs(trace_summand(g, N, shifted, conv) - base));
      }
  }
  return worst;
}

GaussSum gauss_sum(std::int64_t N) {
  if (N < 1) throw ParameterError("N must be positive");
  Complex acc{0.0, 0.0};
  for (std::int64_t r = 0; r < N; ++r) {
    const std::int64_t e = (2 * ((r * r) % N)) % (2 * N);
    acc += root_of_unity_2n(e, N);
  }
  GaussSum out;
  out.direct = acc / std::sqrt(static_cast<double>(N));
  const Complex minus_i_pow = root_of_unity_2n(-(N % 4), 2);  // (-i)^N = e^{-i pi N/2}
  out.closed_form = std::polar(1.0 / std::sqrt(2.0), kPi / 4.0) * (1.0 + minus_i_pow);
  return out;
}

TraceReport trace_compare(const QuantizedMap& q) {
  const Complex formula = trace_theorem_E(q.g, q.N, q.conventions);
  const Complex direct = q.U.matrix().trace();
  std::optional<Complex> ratio;
  if (std::abs(direct) > 1e-9 && std::abs(formula) > 1e-9) {
    const Complex r = formula / direct;
    ratio = r / std::abs(r);
  }
  return TraceReport{q.g, q.N, formula, direct, ratio,
                     std::abs(std::abs(formula) - std::abs(direct)), q.construction};
}

TraceReport trace_compare(const IntegerSymplecticMatrix& g, std::int64_t N,
                          const QuantizeOptions& options) {
  const BigInt det = i_minus(g).determinant();
  if (det == 0)
    throw DegenerateMapError("I - g is singular for g = " + g.to_string());
  return trace_compare(quantize(g, N, options));
}

Complex trace_calibration(const QuantizeOptions& options) {
  const TraceReport r = trace_compare(IntegerSymplecticMatrix::S(), 1, options);
  if (!r.phase_discrepancy) throw NumericalFailureError("calibration trace vanished");
  return *r.phase_discrepancy;
}

nlohmann::json to_json(const TraceReport& r) {
  nlohmann::json j = {{"g", to_json(r.g)},
                      {"N", r.N},
                      {"formula", to_json(r.formula_value)},
                      {"direct", to_json(r.direct_value)},
                      {"magnitude_error", r.magnitude_error},
                      {"construction", to_string(r.construction)}};
  j["phase_ratio"] = r.phase_discrepancy ? to_json(*r.phase_discrepancy) : nlohmann::json();
  return j;
}

}  // namespace catmap

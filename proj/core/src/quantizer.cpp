#include "catmap/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/SVD>

#include "catmap/errors.hpp"
#include "catmap/heisenberg.hpp"

namespace catmap {
namespace {

std::int64_t mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

void check_modulus(std::int64_t N) {
  if (N < 1) throw ParameterError("N must be positive, got " + std::to_string(N));
}

// Inverse of c mod N (c assumed coprime to N).
std::int64_t inverse_mod(std::int64_t c, std::int64_t N) {
  std::int64_t r0 = mod(c, N), r1 = N, s0 = 1, s1 = 0;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return mod(s0, N);
}

// X rho(v)^* and rho(w) X for a monomial Weyl operator whose a*b phase
// coefficient is `ab_coef` (units of i pi / N).
ComplexMatrix monomial_left(std::int64_t N, std::int64_t a, std::int64_t b,
                            std::int64_t ab_coef, const ComplexMatrix& x) {
  const std::int64_t two_n = 2 * N;
  const std::int64_t ab = mod(mod(a, two_n) * mod(b, two_n), two_n);
  ComplexMatrix out(x.rows(), x.cols());
  for (std::int64_t k = 0; k < N; ++k) {
    const std::int64_t e = mod(ab_coef * ab + 2 * mod(a, N) * mod(k + b, N), two_n);
    out.row(mod(k + b, N)) = root_of_unity_2n(e, N) * x.row(k);
  }
  return out;
}

ComplexMatrix monomial_right(const ComplexMatrix& x, std::int64_t N, std::int64_t a,
                             std::int64_t b, std::int64_t ab_coef) {
  const std::int64_t two_n = 2 * N;
  const std::int64_t ab = mod(mod(a, two_n) * mod(b, two_n), two_n);
  ComplexMatrix out(x.rows(), x.cols());
  for (std::int64_t k = 0; k < N; ++k) {
    const std::int64_t e = mod(ab_coef * ab + 2 * mod(a, N) * mod(k + b, N), two_n);
    out.col(k) = root_of_unity_2n(e, N) * x.col(mod(k + b, N));
  }
  return out;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Complex align(const ComplexVector& reference, const ComplexVector& candidate) {
  const Complex ip = candidate.dot(reference);  // conj(candidate) . reference
  const double r = std::abs(ip);
  if (r == 0.0) throw NumericalFailureError("phase alignment against a vanishing column");
  return ip / r;
}

}  // namespace

std::string to_string(Construction c) {
  switch (c) {
    case Construction::kTransformationLaw:
      return "transformation_law";
    case Construction::kGeneratorWord:
      return "generator_word";
    case Construction::kIntertwiner:
      return "intertwiner";
  }
  return "unknown";
}

namespace {

ComplexMatrix fourier_matrix(std::int64_t N) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  ComplexMatrix f(N, N);
  for (std::int64_t mu = 0; mu < N; ++mu)
    for (std::int64_t al = 0; al < N; ++al)
      f(mu, al) = scale * root_of_unity_2n(mod(-2 * mu * al, 2 * N), N);
  return f;
}

}  // namespace

UnitaryOperator quantize_S(std::int64_t N) {
  check_modulus(N);
  return UnitaryOperator(fourier_matrix(N));
}

UnitaryOperator quantize_T(std::int64_t N, TPhase phase) {
  check_modulus(N);
  ComplexMatrix d = ComplexMatrix::Zero(N, N);
  const std::int64_t two_n = 2 * N;
  for (std::int64_t mu = 0; mu < N; ++mu) {
    const std::int64_t sq = mod(mu * mu, two_n);
    std::int64_t e = 0;
    if (phase == TPhase::kFull)
      e = 2 * sq;
    else
      e = (N % 2 == 0) ? sq : (N + 1) * sq;
    d(mu, mu) = root_of_unity_2n(mod(e, two_n), N);
  }
  return UnitaryOperator(std::move(d));
}

Complex relation_scalar(std::int64_t N) {
  check_modulus(N);
  // in units of pi / 4
  const std::int64_t q = (N % 2 == 0) ? 1 : mod(-(N - 1), 8);
  return root_of_unity_2n(q, 4);
}

Complex t_normalization(std::int64_t N, const Conventions& conv) {
  check_modulus(N);
  if (conv.normalization != PhaseNormalization::kGenuine || conv.t_phase != TPhase::kHalf)
    return {1.0, 0.0};
  // a cube root of 1/zeta, in units of pi / 12. Even N: the principal one.
  // Odd N: the branch that keeps trace phases coherent as N varies
  // (exp(i pi (11 - 3N) / 12) cubes to exp(i pi (N - 1) / 4) for odd N).
  if (N % 2 == 0) return root_of_unity_2n(23, 12);
  return root_of_unity_2n(mod(11 - 3 * N, 24), 12);
}

UnitaryOperator generator_operator(Generator s, std::int64_t N, const Conventions& conv) {
  switch (s) {
    case Generator::kS:
      return quantize_S(N);
    case Generator::kSInv:
      return quantize_S(N).adjoint();
    case Generator::kT:
      return quantize_T(N, conv.t_phase).scaled(t_normalization(N, conv));
    case Generator::kTInv:
      return quantize_T(N, conv.t_phase).scaled(t_normalization(N, conv)).adjoint();
  }
  throw ParameterError("unknown generator");
}

UnitaryOperator quantize_word(const Word& w, std::int64_t N, const Conventions& conv) {
  check_modulus(N);
  const bool has_s = std::any_of(w.begin(), w.end(), [](Generator g) {
    return g == Generator::kS || g == Generator::kSInv;
  });
  const ComplexMatrix f = has_s ? fourier_matrix(N) : ComplexMatrix();
  const ComplexVector t =
      quantize_T(N, conv.t_phase).matrix().diagonal() * t_normalization(N, conv);
  // right to left, so T factors act as row scalings
  ComplexMatrix u = ComplexMatrix::Identity(N, N);
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    switch (*it) {
      case Generator::kS:
        u = f * u;
        break;
      case Generator::kSInv:
        u = f.adjoint() * u;
        break;
      case Generator::kT:
        u = t.asDiagonal() * u;
        break;
      case Generator::kTInv:
        u = t.conjugate().asDiagonal() * u;
        break;
    }
  }
  return UnitaryOperator(std::move(u));
}

ComplexVector apply_word(const Word& w, std::int64_t N, const ComplexVector& v,
                         const Conventions& conv) {
  check_modulus(N);
  if (v.size() != N) throw DimensionError("vector length differs from N");
  const bool has_s = std::any_of(w.begin(), w.end(), [](Generator g) {
    return g == Generator::kS || g == Generator::kSInv;
  });
  const ComplexMatrix f = has_s ? fourier_matrix(N) : ComplexMatrix();
  const ComplexVector t =
      quantize_T(N, conv.t_phase).matrix().diagonal() * t_normalization(N, conv);
  ComplexVector out = v;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    switch (*it) {
      case Generator::kS:
        out = f * out;
        break;
      case Generator::kSInv:
        out = f.adjoint() * out;
        break;
      case Generator::kT:
        out = t.cwiseProduct(out);
        break;
      case Generator::kTInv:
        out = t.conjugate().cwiseProduct(out);
        break;
    }
  }
  return out;
}

IntegerSymplecticMatrix reflect(const IntegerSymplecticMatrix& g) {
  const auto [a, b, c, d] = g.entries2();
  return IntegerSymplecticMatrix::sl2(d, b, c, a);
}

namespace {

ComplexMatrix transformation_law_matrix(const IntegerSymplecticMatrix& g, std::int64_t N) {
  check_modulus(N);
  const auto [a0, b0, c0, d0] = g.entries2();
  if (std::gcd(mod(c0, N), N) != 1)
    throw NotApplicableError("transformation law needs gcd(c, N) = 1; c = " +
                             std::to_string(c0) + ", N = " + std::to_string(N));
  const std::int64_t two_n = 2 * N;
  // coefficient table at the reflected matrix (d, b, c, a)
  const std::int64_t a = mod(d0, two_n), b = mod(b0, two_n);
  const std::int64_t c = mod(c0, two_n), d = mod(a0, two_n);
  const std::int64_t c_inv = inverse_mod(c0, N);
  const std::int64_t cd = c * d % two_n, bc = b * c % two_n, ab = a * b % two_n;
  const std::int64_t scale_x = (N % 2 == 0) ? 1 : N + 1;
  const double nu0 = 1.0 / std::sqrt(static_cast<double>(N));
  ComplexMatrix m(N, N);
  for (std::int64_t nu = 0; nu < N; ++nu)
    for (std::int64_t mu = 0; mu < N; ++mu) {
      const std::int64_t alpha = mod(c_inv * mod(nu - a * mu, N), N);
      std::int64_t x = cd * (alpha * alpha % two_n) % two_n;
      x = (x + 2 * (bc * (alpha * mu % two_n) % two_n)) % two_n;
      x = (x + ab * (mu * mu % two_n)) % two_n;
      x = x * scale_x % two_n;
      m(nu, mu) = nu0 * root_of_unity_2n(x, N);
    }
  return m;
}

}  // namespace

UnitaryOperator quantize_transformation_law(const IntegerSymplecticMatrix& g, std::int64_t N) {
  return UnitaryOperator(transformation_law_matrix(g, N));
}

UnitaryOperator averaging_intertwiner(const IntegerSymplecticMatrix& g, std::int64_t N,
                                      std::uint64_t seed) {
  check_modulus(N);
  const auto [a, b, c, d] = g.entries2();
  if (N % 2 == 0 && !theta_group_member(g, N))
    throw NotApplicableError("averaging intertwiner needs (g, N) in the theta group");
  const std::int64_t ab_coef = (N % 2 == 0) ? -1 : -(N + 1);
  std::mt19937_64 rng(seed);
  ComplexMatrix x(N, N);
  for (std::int64_t i = 0; i < N; ++i)
    for (std::int64_t j = 0; j < N; ++j) {
      const double re = uniform01(rng) - 0.5;
      const double im = uniform01(rng) - 0.5;
      x(i, j) = {re, im};
    }
  ComplexMatrix acc = ComplexMatrix::Zero(N, N);
  for (std::int64_t p = 0; p < N; ++p)
    for (std::int64_t q = 0; q < N; ++q) {
      const std::int64_t gp = a * p + b * q, gq = c * p + d * q;
      const ComplexMatrix right = monomial_right(x, N, -p, -q, ab_coef);
      acc += monomial_left(N, gp, gq, ab_coef, right);
    }
  Eigen::JacobiSVD<ComplexMatrix> svd(acc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-8 * sv(0))
    throw NumericalFailureError("averaged operator is singular; choose another seed");
  return UnitaryOperator(svd.matrixU() * svd.matrixV().adjoint());
}

std::vector<std::string> parity_warnings(const IntegerSymplecticMatrix& g, std::int64_t N) {
  std::vector<std::string> w;
  if (!theta_group_member(g, N))
    w.push_back("(g, N) lies outside the theta group: N*a*c or N*b*d is odd");
  return w;
}

QuantizedMap quantize(const IntegerSymplecticMatrix& g, std::int64_t N,
                      const QuantizeOptions& options) {
  check_modulus(N);
  const std::int64_t c = g.entries2()[2];
  const Conventions& conv = options.conventions;
  Word word = generator_decomposition(g);

  using Path = QuantizeOptions::Path;
  Path path = options.path;
  if (path == Path::kAuto)
    path = (std::gcd(mod(c, N), N) == 1) ? Path::kTransformationLaw : Path::kGeneratorWord;

  Construction construction = Construction::kGeneratorWord;
  Complex alignment{1.0, 0.0};
  ComplexMatrix u;
  if (path == Path::kGeneratorWord) {
    u = quantize_word(word, N, conv).matrix();
  } else {
    ComplexMatrix raw;
    if (path == Path::kTransformationLaw) {
      raw = transformation_law_matrix(g, N);
      construction = Construction::kTransformationLaw;
    } else {
      raw = averaging_intertwiner(g, N, options.seed).matrix();
      construction = Construction::kIntertwiner;
    }
    // anchor the global phase on the first column of the word operator
    const ComplexVector reference = apply_word(word, N, ComplexVector::Unit(N, 0), conv);
    alignment = align(reference, raw.col(0));
    u = alignment * raw;
  }

  UnitaryOperator op(std::move(u));
  const double egorov = egorov_residual(op, g, N, conv);
  return QuantizedMap{g,
                      N,
                      std::move(op),
                      construction,
                      conv,
                      std::move(word),
                      alignment,
                      egorov,
                      parity_warnings(g, N)};
}

double egorov_residual(const UnitaryOperator& U, const IntegerSymplecticMatrix& g,
                       std::int64_t N, const Conventions& conv) {
  check_modulus(N);
  if (static_cast<std::int64_t>(U.dim()) != N) throw DimensionError("operator size differs from N");
  const auto [a, b, c, d] = g.entries2();
  const ComplexMatrix& u = U.matrix();
  double worst = 0.0;
  const std::int64_t vs[2][2] = {{1, 0}, {0, 1}};
  for (const auto& v : vs) {
    // U rho(v) = c rho(g v) U, both sides monomial products
    const ComplexMatrix lhs = weyl_right(u, N, v[0], v[1], conv);
    const ComplexMatrix rhs =
        weyl_left(N, mod(a * v[0] + b * v[1], N), mod(c * v[0] + d * v[1], N), u, conv);
    worst = std::max(worst, phase_aligned_distance(lhs, rhs));
  }
  return worst;
}

double egorov_residual(const QuantizedMap& q) {
  return egorov_residual(q.U, q.g, q.N, q.conventions);
}

Complex cocycle(const IntegerSymplecticMatrix& g, const IntegerSymplecticMatrix& h,
                std::int64_t N, const QuantizeOptions& options) {
  const QuantizedMap qg = quantize(g, N, options);
  const QuantizedMap qh = quantize(h, N, options);
  const QuantizedMap qgh = quantize(g * h, N, options);
  const ComplexMatrix lhs = qg.U.matrix() * qh.U.matrix();
  const Complex c = best_phase(lhs, qgh.U.matrix());
  const double r = max_abs(lhs - c * qgh.U.matrix());
  if (r > 1e-8)
    throw ConsistencyError("U_g U_h is not a scalar multiple of U_gh (residual " +
                           std::to_string(r) + ")");
  return c;
}

Complex multiplier_m(const IntegerSymplecticMatrix& g) {
  const std::size_t n = g.half_dimension();
  const IntegerMatrix A = g.A(), B = g.B(), C = g.C(), D = g.D();
  ComplexMatrix z(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      z(i, j) = Complex(static_cast<double>(A(i, j) + D(i, j)),
                        static_cast<double>(B(i, j) - C(i, j)));
  const Complex det = z.determinant();
  if (std::abs(det) == 0.0) throw DegenerateMapError("det(A + D + iB - iC) vanishes");
  return std::pow(2.0, -0.5 * static_cast<double>(n)) * std::sqrt(det);
}

nlohmann::json to_json(const QuantizedMap& q, bool include_matrix) {
  nlohmann::json j = {{"g", to_json(q.g)},
                      {"N", q.N},
                      {"construction", to_string(q.construction)},
                      {"unitarity_residual", q.U.unitarity_residual()},
                      {"egorov_residual", q.egorov_residual},
                      {"word", to_string(q.word)},
                      {"phase_alignment", to_json(q.phase_alignment)},
                      {"warnings", q.warnings},
                      {"conventions", to_json(q.conventions)}};
  if (include_matrix) j["matrix"] = to_json(q.U);
  return j;
}

}  // namespace catmap

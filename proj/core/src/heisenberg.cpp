#include "catmap/heisenberg.hpp"

#include <algorithm>

#include "catmap/errors.hpp"

namespace catmap {
namespace {

std::int64_t mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

void check_modulus(std::int64_t N) {
  if (N < 1) throw ParameterError("modulus N must be positive, got " + std::to_string(N));
}

// Phase exponent (in units of i pi / N) of the entry rho(a,b)_{k+b, k}.
std::int64_t weyl_exponent(std::int64_t N, std::int64_t a, std::int64_t b, std::int64_t k,
                           const Conventions& conv) {
  const std::int64_t two_n = 2 * N;
  const std::int64_t a2 = mod(a, two_n), b2 = mod(b, two_n);
  const std::int64_t ab = mod(a2 * b2, two_n);
  const std::int64_t lin = mod(2 * mod(a, N) * mod(k + b, N), two_n);
  return mod(conv.weyl_phase_sign * ab + lin, two_n);
}

}  // namespace

HeisenbergElement::HeisenbergElement(std::int64_t N, std::vector<std::int64_t> a,
                                     std::vector<std::int64_t> b, std::int64_t phase_index)
    : N_(N), a_(std::move(a)), b_(std::move(b)), k_(0) {
  check_modulus(N);
  if (a_.size() != b_.size()) throw DimensionError("a and b must have the same length");
  for (auto& v : a_) v = mod(v, N);
  for (auto& v : b_) v = mod(v, N);
  k_ = mod(phase_index, 2 * N);
}

std::int64_t symplectic_form(const std::vector<std::int64_t>& a,
                             const std::vector<std::int64_t>& b,
                             const std::vector<std::int64_t>& a2,
                             const std::vector<std::int64_t>& b2, const Conventions& conv) {
  if (a.size() != b.size() || a.size() != a2.size() || a2.size() != b2.size())
    throw DimensionError("symplectic form of vectors with different ranks");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += b[i] * a2[i] - b2[i] * a[i];
  return conv.sigma_sign * s;
}

HeisenbergElement heisenberg_multiply(const HeisenbergElement& x, const HeisenbergElement& y,
                                      const Conventions& conv) {
  if (x.modulus() != y.modulus())
    throw ParameterError("Heisenberg elements with different moduli");
  if (x.rank() != y.rank()) throw DimensionError("Heisenberg elements with different ranks");
  const std::int64_t N = x.modulus();
  std::vector<std::int64_t> a(x.rank()), b(x.rank());
  for (std::size_t i = 0; i < x.rank(); ++i) {
    a[i] = x.a()[i] + y.a()[i];
    b[i] = x.b()[i] + y.b()[i];
  }
  const std::int64_t sigma = mod(symplectic_form(x.a(), x.b(), y.a(), y.b(), conv), N);
  return HeisenbergElement(N, std::move(a), std::move(b),
                           x.phase_index() + y.phase_index() + 2 * sigma);
}

HeisenbergElement heisenberg_inverse(const HeisenbergElement& x) {
  std::vector<std::int64_t> a = x.a(), b = x.b();
  for (auto& v : a) v = -v;
  for (auto& v : b) v = -v;
  return HeisenbergElement(x.modulus(), std::move(a), std::move(b), -x.phase_index());
}

HeisenbergElement heisenberg_commutator(const HeisenbergElement& x, const HeisenbergElement& y,
                                        const Conventions& conv) {
  const HeisenbergElement xy = heisenberg_multiply(x, y, conv);
  const HeisenbergElement xyx = heisenberg_multiply(xy, heisenberg_inverse(x), conv);
  return heisenberg_multiply(xyx, heisenberg_inverse(y), conv);
}

nlohmann::json to_json(const HeisenbergElement& h) {
  return {{"N", h.modulus()},
          {"a", h.a()},
          {"b", h.b()},
          {"phase_index", h.phase_index()},
          {"phase", to_json(h.phase())}};
}

UnitaryOperator weyl_operator(std::int64_t N, std::int64_t a, std::int64_t b,
                              const Conventions& conv) {
  check_modulus(N);
  ComplexMatrix m = ComplexMatrix::Zero(N, N);
  for (std::int64_t k = 0; k < N; ++k)
    m(mod(k + b, N), k) = root_of_unity_2n(weyl_exponent(N, a, b, k, conv), N);
  return UnitaryOperator(std::move(m));
}

ComplexMatrix weyl_left(std::int64_t N, std::int64_t a, std::int64_t b, const ComplexMatrix& x,
                        const Conventions& conv) {
  check_modulus(N);
  if (x.rows() != N) throw DimensionError("operand has the wrong number of rows");
  ComplexMatrix out(x.rows(), x.cols());
  for (std::int64_t k = 0; k < N; ++k)
    out.row(mod(k + b, N)) = root_of_unity_2n(weyl_exponent(N, a, b, k, conv), N) * x.row(k);
  return out;
}

ComplexMatrix weyl_right(const ComplexMatrix& x, std::int64_t N, std::int64_t a, std::int64_t b,
                         const Conventions& conv) {
  check_modulus(N);
  if (x.cols() != N) throw DimensionError("operand has the wrong number of columns");
  ComplexMatrix out(x.rows(), x.cols());
  for (std::int64_t k = 0; k < N; ++k)
    out.col(k) = root_of_unity_2n(weyl_exponent(N, a, b, k, conv), N) * x.col(mod(k + b, N));
  return out;
}

Complex weyl_cocycle(std::int64_t N, std::pair<std::int64_t, std::int64_t> v,
                     std::pair<std::int64_t, std::int64_t> w, const Conventions& conv) {
  check_modulus(N);
  const std::int64_t two_n = 2 * N;
  const std::int64_t a = mod(v.first, two_n), b = mod(v.second, two_n);
  const std::int64_t a2 = mod(w.first, two_n), b2 = mod(w.second, two_n);
  const std::int64_t e = -conv.weyl_phase_sign * (a * b2 + a2 * b) - 2 * a2 * b;
  return root_of_unity_2n(mod(e, two_n), N);
}

int splitting_sign(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& n) {
  if (m.size() != n.size()) throw DimensionError("splitting of vectors with different ranks");
  std::int64_t parity = 0;
  for (std::size_t i = 0; i < m.size(); ++i) parity ^= (m[i] & 1) & (n[i] & 1);
  return parity ? -1 : 1;
}

Complex splitting_phase(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& n) {
  return {static_cast<double>(splitting_sign(m, n)), 0.0};
}

double projective_rep_check(std::int64_t N, const std::vector<WeylPair>& pairs,
                            const Conventions& conv) {
  double worst = 0.0;
  for (const auto& [v, w] : pairs) {
    const ComplexMatrix lhs =
        weyl_left(N, v.first, v.second, weyl_operator(N, w.first, w.second, conv).matrix(), conv);
    const ComplexMatrix rhs =
        weyl_cocycle(N, v, w, conv) *
        weyl_operator(N, v.first + w.first, v.second + w.second, conv).matrix();
    worst = std::max(worst, max_abs(lhs - rhs));
  }
  return worst;
}

}  // namespace catmap

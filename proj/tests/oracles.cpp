#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <set>

namespace oracle {
namespace {

using catmap::BigInt;
using catmap::IntegerMatrix;

// Laplace expansion; only used for k <= 4.
BigInt laplace_det(const std::vector<std::vector<BigInt>>& a) {
  const std::size_t k = a.size();
  if (k == 0) return 1;
  if (k == 1) return a[0][0];
  BigInt det = 0;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<std::vector<BigInt>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<BigInt> row;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) row.push_back(a[r][c]);
      minor.push_back(row);
    }
    const BigInt term = a[0][j] * laplace_det(minor);
    det += (j % 2 == 0) ? term : BigInt(-term);
  }
  return det;
}

std::vector<std::vector<BigInt>> rows_of(const IntegerMatrix& m) {
  std::vector<std::vector<BigInt>> a(m.rows(), std::vector<BigInt>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
  return a;
}

// Classical adjugate: adj(M)(i, j) = (-1)^{i+j} det(M without row j, column i).
std::vector<std::vector<BigInt>> adjugate(const IntegerMatrix& m) {
  const auto a = rows_of(m);
  const std::size_t k = a.size();
  std::vector<std::vector<BigInt>> adj(k, std::vector<BigInt>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::vector<BigInt>> minor;
      for (std::size_t r = 0; r < k; ++r) {
        if (r == j) continue;
        std::vector<BigInt> row;
        for (std::size_t c = 0; c < k; ++c)
          if (c != i) row.push_back(a[r][c]);
        minor.push_back(row);
      }
      const BigInt d = laplace_det(minor);
      adj[i][j] = ((i + j) % 2 == 0) ? d : BigInt(-d);
    }
  return adj;
}

BigInt mod_pos(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

}  // namespace

std::vector<BigInt> coset_key(const IntegerMatrix& m, const catmap::IntVector& v) {
  const auto adj = adjugate(m);
  BigInt det = laplace_det(rows_of(m));
  if (det < 0) det = -det;
  std::vector<BigInt> key(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    BigInt s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += adj[i][j] * v[j];
    key[i] = mod_pos(s, det);
  }
  return key;
}

std::uint64_t coset_count_by_box(const IntegerMatrix& m) {
  const auto adj = adjugate(m);
  BigInt det = laplace_det(rows_of(m));
  if (det < 0) det = -det;
  const std::size_t k = m.rows();
  const auto side = static_cast<std::int64_t>(det);
  std::set<std::vector<BigInt>> keys;
  std::vector<std::int64_t> x(k, 0);
  while (true) {
    std::vector<BigInt> key(k);
    for (std::size_t i = 0; i < k; ++i) {
      BigInt s = 0;
      for (std::size_t j = 0; j < k; ++j) s += adj[i][j] * x[j];
      key[i] = mod_pos(s, det);
    }
    keys.insert(std::move(key));
    std::size_t pos = 0;
    while (pos < k && ++x[pos] == side) x[pos++] = 0;
    if (pos == k) break;
  }
  return keys.size();
}

std::array<std::int64_t, 4> mul2(const std::array<std::int64_t, 4>& x,
                                 const std::array<std::int64_t, 4>& y, std::int64_t N) {
  std::array<std::int64_t, 4> r{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
  if (N > 0)
    for (auto& e : r) e = ((e % N) + N) % N;
  return r;
}

std::uint64_t period_by_powers(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                               std::int64_t N, std::uint64_t cap) {
  const std::array<std::int64_t, 4> g{((a % N) + N) % N, ((b % N) + N) % N, ((c % N) + N) % N,
                                      ((d % N) + N) % N};
  const std::array<std::int64_t, 4> id{1 % N, 0, 0, 1 % N};
  std::array<std::int64_t, 4> p = g;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    if (p == id) return k;
    p = mul2(p, g, N);
  }
  return 0;
}

ComplexMatrix dense_weyl(std::int64_t N, std::int64_t a, std::int64_t b, int phase_sign) {
  const double pi = std::numbers::pi;
  ComplexMatrix u = ComplexMatrix::Zero(N, N);
  ComplexMatrix v = ComplexMatrix::Zero(N, N);
  for (std::int64_t k = 0; k < N; ++k) {
    u(k, k) = std::exp(Complex(0, 2 * pi * static_cast<double>(k) / static_cast<double>(N)));
    v((k + 1) % N, k) = 1.0;
  }
  const std::int64_t ar = ((a % N) + N) % N;
  const std::int64_t br = ((b % N) + N) % N;
  ComplexMatrix ua = ComplexMatrix::Identity(N, N);
  ComplexMatrix vb = ComplexMatrix::Identity(N, N);
  for (std::int64_t i = 0; i < ar; ++i) ua = ua * u;
  for (std::int64_t i = 0; i < br; ++i) vb = vb * v;
  const Complex phase = std::exp(Complex(0, phase_sign * pi * static_cast<double>(a) *
                                                static_cast<double>(b) /
                                                static_cast<double>(N)));
  return phase * ua * vb;
}

Complex gauss_sum_direct(std::int64_t N) {
  Complex acc{0, 0};
  for (std::int64_t r = 0; r < N; ++r) {
    // reduce r^2 mod N in integers; the angle itself stays a plain double
    const auto q = static_cast<double>((r * r) % N);
    acc += std::exp(Complex(0, 2 * std::numbers::pi * q / static_cast<double>(N)));
  }
  return acc / std::sqrt(static_cast<double>(N));
}

ComplexMatrix fourier(std::int64_t N) {
  ComplexMatrix f(N, N);
  const double s = 1.0 / std::sqrt(static_cast<double>(N));
  for (std::int64_t j = 0; j < N; ++j)
    for (std::int64_t k = 0; k < N; ++k)
      f(j, k) = s * std::exp(Complex(0, -2 * std::numbers::pi * static_cast<double>((j * k) % N) /
                                            static_cast<double>(N)));
  return f;
}

std::uint64_t first_scalar_power(const ComplexMatrix& u, std::uint64_t cap, double tol) {
  ComplexMatrix p = u;
  const auto n = static_cast<double>(u.rows());
  for (std::uint64_t k = 1; k <= cap; ++k) {
    const Complex c = p.trace() / n;
    ComplexMatrix d = p - c * ComplexMatrix::Identity(u.rows(), u.cols());
    if (d.cwiseAbs().maxCoeff() <= tol && std::abs(std::abs(c) - 1.0) <= tol) return k;
    p = p * u;
  }
  return 0;
}

Complex trace_of_power(const ComplexMatrix& u, std::uint64_t k) {
  ComplexMatrix p = u;
  for (std::uint64_t i = 1; i < k; ++i) p = p * u;
  return p.trace();
}

catmap::IntegerSymplecticMatrix random_sl2(std::mt19937_64& rng, int len) {
  std::array<std::int64_t, 4> m{1, 0, 0, 1};
  const std::array<std::array<std::int64_t, 4>, 3> gens{
      {{0, -1, 1, 0}, {1, 1, 0, 1}, {1, -1, 0, 1}}};
  for (int i = 0; i < len; ++i) m = mul2(m, gens[rng() % 3]);
  return catmap::IntegerSymplecticMatrix::sl2(m[0], m[1], m[2], m[3]);
}

double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a * b - b * a).cwiseAbs().maxCoeff();
}

std::vector<catmap::IntegerSymplecticMatrix> test_matrices() {
  using M = catmap::IntegerSymplecticMatrix;
  return {M::S(),
          M::sl2(1, 2, 0, 1),    // T^2
          M::sl2(2, 1, 1, 1),    // Arnold cat map
          M::sl2(1, 2, 1, 3),
          M::sl2(1, 1, 1, 2),
          M::sl2(3, 2, 1, 1),
          M::sl2(2, 3, 1, 2),
          M::sl2(0, 1, -1, -1),  // order 3
          M::sl2(4, 1, 3, 1),
          M::sl2(1, 0, 2, 1)};
}

}  // namespace oracle

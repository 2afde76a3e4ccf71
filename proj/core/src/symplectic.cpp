#include "catmap/symplectic.hpp"

#include <tuple>
#include <utility>

#include "catmap/errors.hpp"

namespace catmap {
namespace {

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

void check_even_square(const IntegerMatrix& m) {
  if (!m.is_square()) throw DimensionError("matrix is not square");
  if (m.rows() == 0 || m.rows() % 2 != 0)
    throw DimensionError("symplectic matrices have even positive dimension, got " +
                         std::to_string(m.rows()));
}

bool is_symmetric(const IntegerMatrix& m) { return m == m.transpose(); }

// Returns (g, x, y) with x*a + y*b = g = gcd(a, b) >= 0.
std::tuple<BigInt, BigInt, BigInt> extended_gcd(const BigInt& a, const BigInt& b) {
  BigInt r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    BigInt q = r0 / r1;
    BigInt r2 = r0 - q * r1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    BigInt s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    BigInt t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0 < 0) return {-r0, -s0, -t0};
  return {r0, s0, t0};
}

IntegerMatrix hermite_columns(IntegerMatrix h) {
  const std::size_t n = h.rows();
  auto combine = [&](std::size_t ci, std::size_t cj, const BigInt& x, const BigInt& y,
                     const BigInt& u, const BigInt& v) {
    // (col_i, col_j) <- (x col_i + y col_j, u col_i + v col_j)
    for (std::size_t r = 0; r < n; ++r) {
      BigInt ni = x * h(r, ci) + y * h(r, cj);
      BigInt nj = u * h(r, ci) + v * h(r, cj);
      h(r, ci) = std::move(ni);
      h(r, cj) = std::move(nj);
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (h(i, j) == 0) continue;
      auto [g, x, y] = extended_gcd(h(i, i), h(i, j));
      BigInt p = h(i, i) / g;
      BigInt q = h(i, j) / g;
      combine(i, j, x, y, -q, p);
    }
    if (h(i, i) == 0) throw DegenerateMapError("modulus matrix is singular");
    if (h(i, i) < 0)
      for (std::size_t r = 0; r < n; ++r) h(r, i) = -h(r, i);
    for (std::size_t j = 0; j < i; ++j) {
      BigInt q = floor_div(h(i, j), h(i, i));
      if (q == 0) continue;
      for (std::size_t r = i; r < n; ++r) h(r, j) -= q * h(r, i);
    }
  }
  return h;
}

}  // namespace

bool is_integer_symplectic(const IntegerMatrix& m) {
  check_even_square(m);
  const std::size_t n = m.rows() / 2;
  IntegerMatrix a = m.block(0, 0, n, n), b = m.block(0, n, n, n);
  IntegerMatrix c = m.block(n, 0, n, n), d = m.block(n, n, n, n);
  if (!is_symmetric(a.transpose() * c)) return false;
  if (!is_symmetric(b.transpose() * d)) return false;
  if (!(a.transpose() * d - c.transpose() * b == IntegerMatrix::identity(n))) return false;
  return m.determinant() == 1;
}

IntegerSymplecticMatrix::IntegerSymplecticMatrix(IntegerMatrix m) {
  if (!is_integer_symplectic(m))
    throw NotSymplecticError("matrix " + m.to_string() + " is not integer symplectic");
  n_ = m.rows() / 2;
  m_ = std::move(m);
}

IntegerSymplecticMatrix::IntegerSymplecticMatrix(IntegerMatrix m, Unchecked)
    : m_(std::move(m)), n_(m_.rows() / 2) {}

IntegerSymplecticMatrix IntegerSymplecticMatrix::sl2(long long a, long long b, long long c,
                                                     long long d) {
  return IntegerSymplecticMatrix(IntegerMatrix{{a, b}, {c, d}});
}

IntegerSymplecticMatrix IntegerSymplecticMatrix::identity(std::size_t n) {
  if (n == 0) throw DimensionError("half-dimension must be positive");
  return IntegerSymplecticMatrix(IntegerMatrix::identity(2 * n), Unchecked{});
}

IntegerSymplecticMatrix IntegerSymplecticMatrix::S() { return sl2(0, -1, 1, 0); }
IntegerSymplecticMatrix IntegerSymplecticMatrix::T() { return sl2(1, 1, 0, 1); }

std::array<std::int64_t, 4> IntegerSymplecticMatrix::entries2() const {
  if (n_ != 1) throw DimensionError("expected a 2x2 matrix");
  return {m_.entry_i64(0, 0), m_.entry_i64(0, 1), m_.entry_i64(1, 0), m_.entry_i64(1, 1)};
}

IntegerSymplecticMatrix IntegerSymplecticMatrix::inverse() const {
  IntegerMatrix inv(2 * n_, 2 * n_);
  IntegerMatrix at = A().transpose(), bt = B().transpose();
  IntegerMatrix ct = C().transpose(), dt = D().transpose();
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      inv(i, j) = dt(i, j);
      inv(i, j + n_) = -bt(i, j);
      inv(i + n_, j) = -ct(i, j);
      inv(i + n_, j + n_) = at(i, j);
    }
  return IntegerSymplecticMatrix(std::move(inv), Unchecked{});
}

IntegerSymplecticMatrix IntegerSymplecticMatrix::pow(std::uint64_t k) const {
  return IntegerSymplecticMatrix(power(m_, k), Unchecked{});
}

IntegerSymplecticMatrix operator*(const IntegerSymplecticMatrix& x,
                                  const IntegerSymplecticMatrix& y) {
  if (x.n_ != y.n_) throw DimensionError("half-dimension mismatch");
  return IntegerSymplecticMatrix(x.m_ * y.m_, IntegerSymplecticMatrix::Unchecked{});
}

nlohmann::json to_json(const IntegerSymplecticMatrix& g) {
  return {{"entries", to_json(g.matrix())}};
}

bool theta_group_member(const IntegerSymplecticMatrix& g, std::int64_t N) {
  const IntegerMatrix ac = g.A() * g.C().transpose();
  const IntegerMatrix bd = g.B() * g.D().transpose();
  const BigInt n = N;
  for (std::size_t i = 0; i < ac.rows(); ++i)
    for (std::size_t j = 0; j < ac.cols(); ++j) {
      if ((n * ac(i, j)) % 2 != 0) return false;
      if ((n * bd(i, j)) % 2 != 0) return false;
    }
  return true;
}

CosetSystem::CosetSystem(const IntegerMatrix& modulus) : modulus_(modulus) {
  if (!modulus.is_square() || modulus.rows() == 0)
    throw DimensionError("modulus matrix must be square and non-empty");
  BigInt det = modulus.determinant();
  if (det == 0)
    throw DegenerateMapError("modulus matrix " + modulus.to_string() + " is singular");
  index_ = abs_big(det);
  hermite_ = hermite_columns(modulus);
}

std::vector<IntVector> CosetSystem::representatives(std::uint64_t limit) const {
  if (index_ > limit)
    throw ParameterError("coset index " + index_.str() + " exceeds enumeration limit");
  const std::size_t k = hermite_.rows();
  std::vector<std::int64_t> bound(k);
  for (std::size_t i = 0; i < k; ++i) bound[i] = to_i64(hermite_(i, i));
  std::vector<IntVector> reps;
  reps.reserve(static_cast<std::size_t>(index_));
  std::vector<std::int64_t> cur(k, 0);
  while (true) {
    reps.emplace_back(cur.begin(), cur.end());
    std::size_t pos = k;
    while (pos > 0) {
      --pos;
      if (++cur[pos] < bound[pos]) break;
      cur[pos] = 0;
      if (pos == 0) return reps;
    }
    if (k == 0) return reps;
  }
}

IntVector CosetSystem::reduce(const IntVector& v) const {
  const std::size_t k = hermite_.rows();
  if (v.size() != k) throw DimensionError("vector size mismatch");
  IntVector x = v;
  for (std::size_t i = 0; i < k; ++i) {
    BigInt q = floor_div(x[i], hermite_(i, i));
    if (q == 0) continue;
    for (std::size_t r = i; r < k; ++r) x[r] -= q * hermite_(r, i);
  }
  return x;
}

bool CosetSystem::congruent(const IntVector& u, const IntVector& v) const {
  return reduce(u) == reduce(v);
}

CosetSystem coset_representatives(const IntegerMatrix& m) { return CosetSystem(m); }

std::uint64_t arithmetic_period(const IntegerSymplecticMatrix& g, std::int64_t N,
                                std::uint64_t cap) {
  if (N < 1) throw ParameterError("N must be positive");
  const std::size_t k = g.matrix().rows();
  __extension__ typedef unsigned __int128 u128;
  const auto mod = static_cast<std::uint64_t>(N);
  std::vector<std::uint64_t> base(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      base[i * k + j] = static_cast<std::uint64_t>(mod_floor(g.matrix()(i, j), N));
  auto is_identity = [&](const std::vector<std::uint64_t>& m) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (m[i * k + j] != ((i == j) ? 1 % mod : 0)) return false;
    return true;
  };
  std::vector<std::uint64_t> cur = base, next(k * k);
  for (std::uint64_t p = 1; p <= cap; ++p) {
    if (is_identity(cur)) return p;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        u128 acc = 0;
        for (std::size_t l = 0; l < k; ++l)
          acc += static_cast<u128>(cur[i * k + l]) * base[l * k + j] % mod;
        next[i * k + j] = static_cast<std::uint64_t>(acc % mod);
      }
    std::swap(cur, next);
  }
  throw PeriodNotFoundError("no period <= " + std::to_string(cap) + " for N = " +
                            std::to_string(N));
}

std::string to_string(Generator s) {
  switch (s) {
    case Generator::kS:
      return "S";
    case Generator::kT:
      return "T";
    case Generator::kSInv:
      return "S^-1";
    case Generator::kTInv:
      return "T^-1";
  }
  return "?";
}

std::string to_string(const Word& w) {
  std::string out = "[";
  for (std::size_t i = 0; i < w.size(); ++i) out += (i ? "," : "") + to_string(w[i]);
  return out + "]";
}

IntegerSymplecticMatrix generator_matrix(Generator s) {
  switch (s) {
    case Generator::kS:
      return IntegerSymplecticMatrix::S();
    case Generator::kT:
      return IntegerSymplecticMatrix::T();
    case Generator::kSInv:
      return IntegerSymplecticMatrix::sl2(0, 1, -1, 0);
    case Generator::kTInv:
      return IntegerSymplecticMatrix::sl2(1, -1, 0, 1);
  }
  throw ParameterError("unknown generator");
}

IntegerSymplecticMatrix word_product(const Word& w) {
  IntegerSymplecticMatrix p = IntegerSymplecticMatrix::identity(1);
  for (Generator s : w) p = p * generator_matrix(s);
  return p;
}

Word generator_decomposition(const IntegerSymplecticMatrix& g) {
  if (g.half_dimension() != 1)
    throw DimensionError("generator words are only produced for SL(2, Z)");
  BigInt a = g.matrix()(0, 0), b = g.matrix()(0, 1);
  BigInt c = g.matrix()(1, 0), d = g.matrix()(1, 1);

  // Left multiplications L_k...L_1 g = M; g = L_1^-1 ... L_k^-1 M.
  Word prefix;
  auto push_power_of_t = [&](const BigInt& q) {
    // records L = T^-q, whose inverse T^q goes into the word
    const Generator s = q > 0 ? Generator::kT : Generator::kTInv;
    for (BigInt i = 0; i < abs_big(q); ++i) prefix.push_back(s);
  };
  while (c != 0) {
    if (abs_big(a) >= abs_big(c)) {
      BigInt q = floor_div(a, c);
      if (abs_big(a - (q + 1) * c) < abs_big(a - q * c)) q += 1;
      a -= q * c;
      b -= q * d;
      push_power_of_t(q);
    }
    // S^-1 [[a,b],[c,d]] = [[c,d],[-a,-b]]
    BigInt na = c, nb = d;
    c = -a;
    d = -b;
    a = std::move(na);
    b = std::move(nb);
    prefix.push_back(Generator::kS);
  }
  // Now M = [[a,b],[0,d]] with a = d = +-1.
  if (a == -1) {
    prefix.push_back(Generator::kS);
    prefix.push_back(Generator::kS);
    b = -b;  // -I * [[1,-b],[0,1]]
  }
  push_power_of_t(b);

  Word reduced;
  auto cancels = [](Generator x, Generator y) {
    return (x == Generator::kS && y == Generator::kSInv) ||
           (x == Generator::kSInv && y == Generator::kS) ||
           (x == Generator::kT && y == Generator::kTInv) ||
           (x == Generator::kTInv && y == Generator::kT);
  };
  for (Generator s : prefix) {
    if (!reduced.empty() && cancels(reduced.back(), s))
      reduced.pop_back();
    else
      reduced.push_back(s);
  }
  if (!(word_product(reduced) == g))
    throw ConsistencyError("generator word does not multiply back to " + g.to_string());
  return reduced;
}

}  // namespace catmap

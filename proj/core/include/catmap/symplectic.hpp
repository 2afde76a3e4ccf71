#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "catmap/integer_matrix.hpp"

namespace catmap {

bool is_integer_symplectic(const IntegerMatrix& m);

// An element of Sp(2n, Z), split into n x n blocks [[A, B], [C, D]].
class IntegerSymplecticMatrix {
 public:
  // Throws DimensionError for odd or non-square input, NotSymplecticError
  // when the block identities or det = 1 fail.
  explicit IntegerSymplecticMatrix(IntegerMatrix m);

  // Convenience for SL(2, Z) = Sp(2, Z).
  static IntegerSymplecticMatrix sl2(long long a, long long b, long long c, long long d);
  static IntegerSymplecticMatrix identity(std::size_t n);
  static IntegerSymplecticMatrix S();  // [[0,-1],[1,0]]
  static IntegerSymplecticMatrix T();  // [[1,1],[0,1]]

  std::size_t half_dimension() const { return n_; }
  const IntegerMatrix& matrix() const { return m_; }
  IntegerMatrix A() const { return m_.block(0, 0, n_, n_); }
  IntegerMatrix B() const { return m_.block(0, n_, n_, n_); }
  IntegerMatrix C() const { return m_.block(n_, 0, n_, n_); }
  IntegerMatrix D() const { return m_.block(n_, n_, n_, n_); }

  // Entries (a, b, c, d) of a 2 x 2 matrix as int64. DimensionError if n != 1.
  std::array<std::int64_t, 4> entries2() const;

  IntegerSymplecticMatrix inverse() const;  // [[D^T, -B^T], [-C^T, A^T]]
  IntegerSymplecticMatrix pow(std::uint64_t k) const;

  friend IntegerSymplecticMatrix operator*(const IntegerSymplecticMatrix& x,
                                           const IntegerSymplecticMatrix& y);
  friend bool operator==(const IntegerSymplecticMatrix& x,
                         const IntegerSymplecticMatrix& y) {
    return x.m_ == y.m_;
  }

  std::string to_string() const { return m_.to_string(); }

 private:
  struct Unchecked {};
  IntegerSymplecticMatrix(IntegerMatrix m, Unchecked);

  IntegerMatrix m_;
  std::size_t n_ = 0;
};

nlohmann::json to_json(const IntegerSymplecticMatrix& g);

// N*A*C^T and N*B*D^T have only even entries (for n = 1: N a c, N b d even).
bool theta_group_member(const IntegerSymplecticMatrix& g, std::int64_t N);

// Cosets Z^k / M Z^k for a nonsingular square integer matrix M.
class CosetSystem {
 public:
  explicit CosetSystem(const IntegerMatrix& modulus);

  const IntegerMatrix& modulus_matrix() const { return modulus_; }
  // Lower-triangular column Hermite form H = M W (W unimodular), with
  // positive diagonal and 0 <= H(i,j) < H(i,i) for j < i.
  const IntegerMatrix& hermite_basis() const { return hermite_; }
  const BigInt& index() const { return index_; }

  // Enumerates the box prod [0, H(i,i)) in lexicographic order. Throws
  // ParameterError when the index exceeds `limit`.
  std::vector<IntVector> representatives(std::uint64_t limit = 50'000'000) const;

  // The unique box representative congruent to v.
  IntVector reduce(const IntVector& v) const;
  bool congruent(const IntVector& u, const IntVector& v) const;

 private:
  IntegerMatrix modulus_;
  IntegerMatrix hermite_;
  BigInt index_;
};

// Throws DegenerateMapError when M is singular.
CosetSystem coset_representatives(const IntegerMatrix& m);

// Least k >= 1 with g^k = I mod N. PeriodNotFoundError past `cap`.
std::uint64_t arithmetic_period(const IntegerSymplecticMatrix& g, std::int64_t N,
                                std::uint64_t cap = 1'000'000);

enum class Generator { kS, kT, kSInv, kTInv };
using Word = std::vector<Generator>;

std::string to_string(Generator s);
std::string to_string(const Word& w);
IntegerSymplecticMatrix generator_matrix(Generator s);

// Product of the word, leftmost letter leftmost factor.
IntegerSymplecticMatrix word_product(const Word& w);

// Euclidean reduction of g in SL(2, Z) to a word in S, T and their inverses
// whose product is exactly g. DimensionError for n != 1.
Word generator_decomposition(const IntegerSymplecticMatrix& g);

}  // namespace catmap

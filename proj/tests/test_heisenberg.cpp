#include <cmath>
#include <numbers>

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include "catmap/errors.hpp"
#include "catmap/heisenberg.hpp"
#include "oracles.hpp"

using namespace catmap;

namespace {

Complex expi(double angle) { return std::polar(1.0, angle); }

HeisenbergElement h1(std::int64_t N, std::int64_t a, std::int64_t b, std::int64_t k = 0) {
  return HeisenbergElement(N, {a}, {b}, k);
}

}  // namespace

TEST(HeisenbergGroup, CentralElementsCommute) {
  const auto x = heisenberg_multiply(h1(5, 0, 0), h1(5, 0, 0, 3));
  EXPECT_EQ(x, h1(5, 0, 0, 3));
}

TEST(HeisenbergGroup, ProductPhaseFollowsSymplecticForm) {
  for (std::int64_t N = 1; N <= 12; ++N) {
    const auto p = heisenberg_multiply(h1(N, 1, 0), h1(N, 0, 1));
    // sigma((1,0),(0,1)) = <xi, x'> - <xi', x> = 0 - 1
    const Complex expected = expi(2 * std::numbers::pi * -1.0 / static_cast<double>(N));
    EXPECT_LT(std::abs(p.phase() - expected), 1e-13) << "N=" << N;
    EXPECT_EQ(p.a(), std::vector<std::int64_t>{1 % N});
    EXPECT_EQ(p.b(), std::vector<std::int64_t>{1 % N});
  }
}

TEST(HeisenbergGroup, CommutatorIsCentral) {
  for (std::int64_t N = 1; N <= 12; ++N) {
    const auto c = heisenberg_commutator(h1(N, 1, 0), h1(N, 0, 1));
    EXPECT_EQ(c.a(), std::vector<std::int64_t>{0});
    EXPECT_EQ(c.b(), std::vector<std::int64_t>{0});
    const Complex expected = expi(-4 * std::numbers::pi / static_cast<double>(N));
    EXPECT_LT(std::abs(c.phase() - expected), 1e-13) << "N=" << N;
  }
}

TEST(HeisenbergGroup, FlippedSigmaConjugatesCommutator) {
  Conventions conv;
  conv.sigma_sign = -1;
  const auto c = heisenberg_commutator(h1(7, 1, 0), h1(7, 0, 1), conv);
  EXPECT_LT(std::abs(c.phase() - expi(4 * std::numbers::pi / 7.0)), 1e-13);
}

TEST(HeisenbergGroup, PhaseIsA2NthRootOfUnity) {
  for (std::int64_t N = 1; N <= 6; ++N)
    for (std::int64_t a = 0; a < N; ++a)
      for (std::int64_t b = 0; b < N; ++b) {
        const auto p = heisenberg_multiply(h1(N, a, b, 1), h1(N, b, a, 2));
        EXPECT_LT(std::abs(std::pow(p.phase(), 2 * N) - 1.0), 1e-11);
      }
}

TEST(HeisenbergGroup, AssociativeOnExhaustiveTriples) {
  for (std::int64_t N = 1; N <= 5; ++N) {
    std::vector<HeisenbergElement> all;
    for (std::int64_t a = 0; a < N; ++a)
      for (std::int64_t b = 0; b < N; ++b)
        for (std::int64_t k : {std::int64_t{0}, N - 1}) all.push_back(h1(N, a, b, k));
    for (const auto& x : all)
      for (const auto& y : all)
        for (const auto& z : all)
          ASSERT_EQ(heisenberg_multiply(heisenberg_multiply(x, y), z),
                    heisenberg_multiply(x, heisenberg_multiply(y, z)));
  }
}

TEST(HeisenbergGroup, InverseAndErrors) {
  const auto x = HeisenbergElement(6, {1, 4}, {5, 2}, 7);
  EXPECT_EQ(heisenberg_multiply(x, heisenberg_inverse(x)), HeisenbergElement(6, {0, 0}, {0, 0}));
  EXPECT_THROW(heisenberg_multiply(h1(3, 1, 1), h1(4, 1, 1)), ParameterError);
  EXPECT_THROW(heisenberg_multiply(h1(3, 1, 1), HeisenbergElement(3, {1, 1}, {0, 0})),
               DimensionError);
  EXPECT_THROW(h1(0, 0, 0), ParameterError);
}

TEST(WeylOperator, IdentityAndModulation) {
  for (std::int64_t N = 1; N <= 9; ++N) {
    EXPECT_LT(max_abs(weyl_operator(N, 0, 0).matrix() - ComplexMatrix::Identity(N, N)), 1e-15);
    ComplexMatrix diag = ComplexMatrix::Zero(N, N);
    for (std::int64_t k = 0; k < N; ++k)
      diag(k, k) = expi(2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N));
    EXPECT_LT(max_abs(weyl_operator(N, 1, 0).matrix() - diag), 1e-14);
  }
}

TEST(WeylOperator, CanonicalCommutationRelation) {
  for (std::int64_t N = 1; N <= 16; ++N) {
    const ComplexMatrix u = weyl_operator(N, 1, 0).matrix();
    const ComplexMatrix v = weyl_operator(N, 0, 1).matrix();
    const Complex w = expi(2 * std::numbers::pi / static_cast<double>(N));
    EXPECT_LT(max_abs(u * v - w * v * u), 1e-13) << "N=" << N;
  }
}

TEST(WeylOperator, MatchesDenseProductOracle) {
  for (std::int64_t N : {1, 2, 3, 4, 7, 10}) {
    for (std::int64_t a = -N; a <= 2 * N; ++a)
      for (std::int64_t b = -N; b <= 2 * N; ++b) {
        const ComplexMatrix expected = oracle::dense_weyl(N, a, b);
        ASSERT_LT(max_abs(weyl_operator(N, a, b).matrix() - expected), 1e-12)
            << "N=" << N << " a=" << a << " b=" << b;
      }
  }
}

TEST(WeylOperator, FastLeftRightMatchDense) {
  const std::int64_t N = 9;
  ComplexMatrix x = ComplexMatrix::Random(N, N);
  for (std::int64_t a = -3; a <= 3; ++a)
    for (std::int64_t b = -3; b <= 3; ++b) {
      const ComplexMatrix r = weyl_operator(N, a, b).matrix();
      EXPECT_LT(max_abs(weyl_left(N, a, b, x) - r * x), 1e-13);
      EXPECT_LT(max_abs(weyl_right(x, N, a, b) - x * r), 1e-13);
    }
}

TEST(WeylOperator, UnitaryAndAdjointIsNegation) {
  for (std::int64_t N = 1; N <= 12; ++N)
    for (std::int64_t a = 0; a < N; ++a)
      for (std::int64_t b = 0; b < N; ++b) {
        const UnitaryOperator r = weyl_operator(N, a, b);
        ASSERT_LE(r.unitarity_residual(), 1e-12);
        ASSERT_LT(max_abs(weyl_operator(N, -a, -b).matrix() - r.matrix().adjoint()), 1e-13);
      }
}

TEST(WeylOperator, NthPowerIsScalar) {
  for (std::int64_t N = 1; N <= 64; N += (N < 16 ? 1 : 7)) {
    for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{1, 0}, {0, 1}, {1, 1}, {2, 3}, {N - 1, 5}}) {
      ComplexMatrix p = ComplexMatrix::Identity(N, N);
      const ComplexMatrix r = weyl_operator(N, a, b).matrix();
      for (std::int64_t i = 0; i < N; ++i) p = p * r;
      const Complex c = p(0, 0);
      EXPECT_NEAR(std::abs(c), 1.0, 1e-10);
      EXPECT_LT(max_abs(p - c * ComplexMatrix::Identity(N, N)), 1e-10) << N << " " << a << " " << b;
    }
  }
}

// X commuting with U and V: solve [U, X] = [V, X] = 0 as a linear system in
// the N^2 entries and count the null space.
TEST(WeylOperator, CommutantIsScalars) {
  for (std::int64_t N = 1; N <= 16; ++N) {
    const ComplexMatrix u = weyl_operator(N, 1, 0).matrix();
    const ComplexMatrix v = weyl_operator(N, 0, 1).matrix();
    const std::int64_t n2 = N * N;
    ComplexMatrix sys = ComplexMatrix::Zero(2 * n2, n2);
    for (std::int64_t col = 0; col < n2; ++col) {
      ComplexMatrix e = ComplexMatrix::Zero(N, N);
      e(col % N, col / N) = 1.0;
      const ComplexMatrix cu = u * e - e * u;
      const ComplexMatrix cv = v * e - e * v;
      for (std::int64_t r = 0; r < n2; ++r) {
        sys(r, col) = cu(r % N, r / N);
        sys(n2 + r, col) = cv(r % N, r / N);
      }
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(sys);
    const auto& s = svd.singularValues();
    int null_dim = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) < 1e-9) ++null_dim;
    EXPECT_EQ(null_dim, 1) << "N=" << N;
  }
}

TEST(WeylCocycle, ProjectiveRepresentation) {
  EXPECT_EQ(projective_rep_check(1, {{{1, 2}, {3, 4}}}), 0.0);
  EXPECT_EQ(projective_rep_check(5, {{{0, 0}, {0, 0}}}), 0.0);
  std::vector<WeylPair> basis;
  for (std::int64_t a = 0; a < 4; ++a)
    for (std::int64_t b = 0; b < 4; ++b) basis.push_back({{a, b}, {b, a}});
  EXPECT_LE(projective_rep_check(4, basis), 1e-12);
  for (std::int64_t N = 2; N <= 9; ++N) {
    std::vector<WeylPair> all;
    for (std::int64_t a = -N; a <= N; a += 2)
      for (std::int64_t b = -2; b <= N; ++b)
        for (std::int64_t c = 0; c < 3; ++c) all.push_back({{a, b}, {c - 1, a + c}});
    EXPECT_LE(projective_rep_check(N, all), 1e-12) << "N=" << N;
  }
}

TEST(WeylCocycle, AgreesWithDenseProducts) {
  const std::int64_t N = 6;
  for (std::int64_t a = -2; a <= 3; ++a)
    for (std::int64_t b = -2; b <= 3; ++b)
      for (std::int64_t c = 0; c <= 2; ++c)
        for (std::int64_t d = 0; d <= 2; ++d) {
          const ComplexMatrix lhs = oracle::dense_weyl(N, a, b) * oracle::dense_weyl(N, c, d);
          const ComplexMatrix rhs = weyl_cocycle(N, {a, b}, {c, d}) * oracle::dense_weyl(N, a + c, b + d);
          ASSERT_LT(max_abs(lhs - rhs), 1e-12);
        }
}

TEST(Splitting, Signs) {
  EXPECT_EQ(splitting_phase({0}, {0}), Complex(1.0, 0.0));
  EXPECT_EQ(splitting_phase({1}, {1}), Complex(-1.0, 0.0));
  EXPECT_EQ(splitting_phase({2}, {3}), Complex(1.0, 0.0));
  EXPECT_EQ(splitting_sign({1, 1}, {1, 1}), 1);
  EXPECT_EQ(splitting_sign({-3, 2}, {5, 7}), -1);
  EXPECT_THROW(splitting_sign({1}, {1, 2}), DimensionError);
}

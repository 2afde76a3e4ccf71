#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "catmap/conventions.hpp"
#include "catmap/symplectic.hpp"
#include "catmap/unitary.hpp"

namespace catmap {

enum class Construction { kTransformationLaw, kGeneratorWord, kIntertwiner };
std::string to_string(Construction c);

struct QuantizeOptions {
  enum class Path { kAuto, kTransformationLaw, kGeneratorWord, kIntertwiner };
  Path path = Path::kAuto;
  Conventions conventions{};
  std::uint64_t seed = 20240601;  // random operand of the averaging intertwiner
};

struct QuantizedMap {
  IntegerSymplecticMatrix g;
  std::int64_t N;
  UnitaryOperator U;
  Construction construction;
  Conventions conventions;
  Word word;                    // generator word of g (empty for N = 1 shortcuts)
  Complex phase_alignment;      // scalar applied to align with the word convention
  double egorov_residual;
  std::vector<std::string> warnings;
};

// Finite Fourier transform, entries N^-1/2 exp(-2 pi i mu alpha / N).
UnitaryOperator quantize_S(std::int64_t N);

// Bare diagonal quantization of T (no global rescaling).
UnitaryOperator quantize_T(std::int64_t N, TPhase phase = TPhase::kHalf);

// zeta_N with (F D)^3 = zeta_N F^2, D = quantize_T(N, kHalf).
Complex relation_scalar(std::int64_t N);

// Scalar multiplying quantize_T in the active normalization: a cube root of
// 1 / zeta_N for kGenuine (principal for even N, exp(i pi (11 - 3N) / 12)
// for odd N), 1 otherwise.
Complex t_normalization(std::int64_t N, const Conventions& conv);

// Generator quantizations as used inside words.
UnitaryOperator generator_operator(Generator s, std::int64_t N, const Conventions& conv);

// Product of generator operators along w.
UnitaryOperator quantize_word(const Word& w, std::int64_t N,
                              const Conventions& conv = default_conventions());
// The same product applied to a single vector in O(|w| N^2).
ComplexVector apply_word(const Word& w, std::int64_t N, const ComplexVector& v,
                         const Conventions& conv = default_conventions());

// [[d, b], [c, a]], the matrix whose closed-form coefficient table
// intertwines g in the basis used here.
IntegerSymplecticMatrix reflect(const IntegerSymplecticMatrix& g);

// The unitary with entries N^-1/2 exp(i pi X / N),
//   X = c d alpha^2 + 2 b c alpha mu + a b mu^2,  alpha = c^-1 (nu - a mu) mod N,
// evaluated at reflect(g) = (d, b, c, a); for odd N, X is scaled by N + 1
// (the inverse of 2 mod N, doubled). Requires gcd(c, N) = 1, else
// NotApplicableError.
UnitaryOperator quantize_transformation_law(const IntegerSymplecticMatrix& g, std::int64_t N);

// Polar part of sum_v rho(g v) X rho(v)^*. Odd N uses the N-periodic lift
// rho(a,b) = exp(-2 pi i h a b / N) U^a V^b, h = (N + 1) / 2.
UnitaryOperator averaging_intertwiner(const IntegerSymplecticMatrix& g, std::int64_t N,
                                      std::uint64_t seed = 20240601);

// Warnings for (g, N) outside the theta group.
std::vector<std::string> parity_warnings(const IntegerSymplecticMatrix& g, std::int64_t N);

QuantizedMap quantize(const IntegerSymplecticMatrix& g, std::int64_t N,
                      const QuantizeOptions& options = {});

// max over v in {(1,0),(0,1)} of min_c ||U rho(v) - c rho(g v mod N) U||_max,
// the intertwining form of U rho(v) U^* = c rho(g v); O(N^2).
double egorov_residual(const UnitaryOperator& U, const IntegerSymplecticMatrix& g,
                       std::int64_t N, const Conventions& conv = default_conventions());
double egorov_residual(const QuantizedMap& q);

// c with U_g U_h = c U_{gh}. ConsistencyError if no unit scalar fits to 1e-8.
Complex cocycle(const IntegerSymplecticMatrix& g, const IntegerSymplecticMatrix& h,
                std::int64_t N, const QuantizeOptions& options = {});

// 2^{-n/2} det(A + D + iB - iC)^{1/2}, principal branch.
Complex multiplier_m(const IntegerSymplecticMatrix& g);

nlohmann::json to_json(const QuantizedMap& q, bool include_matrix = true);

}  // namespace catmap

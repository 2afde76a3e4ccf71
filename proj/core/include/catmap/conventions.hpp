#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace catmap {

// Diagonal phase used for the quantization of T = [[1,1],[0,1]].
enum class TPhase {
  // exp(i pi mu^2 / N) for even N; for odd N the mod-N consistent lift
  // exp(2 pi i h mu^2 / N) with h = (N+1)/2 the inverse of 2 mod N.
  kHalf,
  // exp(2 pi i mu^2 / N). Intertwines T^2, not T: kept for comparison and
  // for fault injection.
  kFull,
};

// How the global phase of U_{g,N} is fixed.
enum class PhaseNormalization {
  // U_T is rescaled so that U_S^4 = 1 and (U_S U_T)^3 = U_S^2 hold exactly.
  // g -> U_{g,N} is then a genuine representation of SL(2,Z).
  kGenuine,
  // U_S and U_T carry their bare phases; words inherit by multiplication.
  kRawGenerators,
};

// Form of the degree-N theta functions on the Heisenberg group.
enum class ThetaGauge {
  // exp(-i pi N x xi) * sum exp(2 pi i N [tau/2 (mu/N + gamma - xi)^2
  //                                       + (mu/N + gamma) x]).
  // Left invariant under the integral subgroup for the symmetric group law.
  kSymmetric,
  // Linear term <(mu/N) xi + gamma, x> with quadratic term in (xi + mu/N + gamma).
  kMixedLinear,
  // Quadratic and linear terms both in (mu/N - xi + gamma), no gauge factor.
  kReflected,
};

// Every calibration choice that affects a reported number. Reports carry a
// copy so results can be reproduced by another implementation.
struct Conventions {
  // sigma((x,xi),(x',xi')) = sigma_sign * (<xi,x'> - <xi',x>).
  int sigma_sign = +1;
  // rho_N(a,b) = exp(weyl_phase_sign * i pi a b / N) U^a V^b, with
  // U = diag(exp(2 pi i k / N)) and V e_k = e_{k+1}.
  int weyl_phase_sign = -1;
  TPhase t_phase = TPhase::kHalf;
  PhaseNormalization normalization = PhaseNormalization::kGenuine;
  ThetaGauge theta_gauge = ThetaGauge::kSymmetric;

  friend bool operator==(const Conventions&, const Conventions&) = default;
};

const Conventions& default_conventions();

std::string to_string(TPhase p);
std::string to_string(PhaseNormalization p);
std::string to_string(ThetaGauge g);

nlohmann::json to_json(const Conventions& c);

}  // namespace catmap

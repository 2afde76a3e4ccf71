#include "catmap/conventions.hpp"

namespace catmap {

const Conventions& default_conventions() {
  static const Conventions kDefault{};
  return kDefault;
}

std::string to_string(TPhase p) {
  switch (p) {
    case TPhase::kHalf:
      return "half";
    case TPhase::kFull:
      return "full";
  }
  return "unknown";
}

std::string to_string(PhaseNormalization p) {
  switch (p) {
    case PhaseNormalization::kGenuine:
      return "genuine";
    case PhaseNormalization::kRawGenerators:
      return "raw-generators";
  }
  return "unknown";
}

std::string to_string(ThetaGauge g) {
  switch (g) {
    case ThetaGauge::kSymmetric:
      return "symmetric";
    case ThetaGauge::kMixedLinear:
      return "mixed-linear";
    case ThetaGauge::kReflected:
      return "reflected";
  }
  return "unknown";
}

nlohmann::json to_json(const Conventions& c) {
  return {
      {"sigma", c.sigma_sign > 0 ? "<xi,x'> - <xi',x>" : "<xi',x> - <xi,x'>"},
      {"weyl_ordering", c.weyl_phase_sign < 0 ? "exp(-i pi a b/N) U^a V^b"
                                              : "exp(+i pi a b/N) U^a V^b"},
      {"shift", "V e_k = e_{k+1}"},
      {"t_phase", to_string(c.t_phase)},
      {"phase_normalization", to_string(c.normalization)},
      {"theta_gauge", to_string(c.theta_gauge)},
      {"sqrt_branch", "principal, arg in (-pi, pi]"},
  };
}

}  // namespace catmap

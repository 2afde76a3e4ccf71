#pragma once

#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "catmap/quantizer.hpp"
#include "catmap/symplectic.hpp"
#include "catmap/unitary.hpp"

namespace catmap {

// det(I - g)^{-1/2} * sum over cosets w = (m, n) of Z^2n / (g - I) Z^2n of
//   exp(i pi N [<m, n> - sigma(w, (I - g)^{-1} w)]),
// exponent reduced mod 2 in exact rationals, principal square root.
// DegenerateMapError when det(I - g) = 0.
Complex trace_theorem_E(const IntegerSymplecticMatrix& g, std::int64_t N,
                        const Conventions& conv = default_conventions());

// Individual summand for an integer vector w (any representative).
Complex trace_summand(const IntegerSymplecticMatrix& g, std::int64_t N, const IntVector& w,
                      const Conventions& conv = default_conventions());

// max |summand(w) - summand(w +- (g - I) e_j)| over the representatives.
// Zero means the coset sum does not depend on the chosen representatives.
double coset_independence_defect(const IntegerSymplecticMatrix& g, std::int64_t N,
                                 const Conventions& conv = default_conventions());

struct GaussSum {
  Complex direct;       // N^{-1/2} sum_r exp(2 pi i r^2 / N)
  Complex closed_form;  // 2^{-1/2} e^{i pi/4} (1 + (-i)^N)
};
GaussSum gauss_sum(std::int64_t N);

struct TraceReport {
  IntegerSymplecticMatrix g;
  std::int64_t N;
  Complex formula_value;
  Complex direct_value;
  // formula / direct as a unit number; empty when the trace vanishes.
  std::optional<Complex> phase_discrepancy;
  double magnitude_error;
  Construction construction;
};

TraceReport trace_compare(const IntegerSymplecticMatrix& g, std::int64_t N,
                          const QuantizeOptions& options = {});
TraceReport trace_compare(const QuantizedMap& q);

// Phase ratio formula / Tr U_S at N = 1: the single constant against which
// all other phase ratios are compared.
Complex trace_calibration(const QuantizeOptions& options = {});

nlohmann::json to_json(const TraceReport& r);

}  // namespace catmap

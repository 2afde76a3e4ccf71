#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "catmap/conventions.hpp"
#include "catmap/unitary.hpp"

namespace catmap {

// (a, b, lambda) in Heis(Z^n / N). The central phase is kept exactly as
// lambda = exp(i pi k / N) with k in [0, 2N).
class HeisenbergElement {
 public:
  HeisenbergElement(std::int64_t N, std::vector<std::int64_t> a, std::vector<std::int64_t> b,
                    std::int64_t phase_index = 0);

  std::int64_t modulus() const { return N_; }
  std::size_t rank() const { return a_.size(); }
  const std::vector<std::int64_t>& a() const { return a_; }
  const std::vector<std::int64_t>& b() const { return b_; }
  std::int64_t phase_index() const { return k_; }
  Complex phase() const { return root_of_unity_2n(k_, N_); }

  friend bool operator==(const HeisenbergElement&, const HeisenbergElement&) = default;

 private:
  std::int64_t N_;
  std::vector<std::int64_t> a_, b_;
  std::int64_t k_;
};

// sigma((a,b),(a',b')) with x = a, xi = b, signed per the conventions.
std::int64_t symplectic_form(const std::vector<std::int64_t>& a,
                             const std::vector<std::int64_t>& b,
                             const std::vector<std::int64_t>& a2,
                             const std::vector<std::int64_t>& b2,
                             const Conventions& conv = default_conventions());

// Componentwise addition mod N; phases multiply with exp((2 pi i / N) sigma).
// ParameterError on modulus mismatch, DimensionError on rank mismatch.
HeisenbergElement heisenberg_multiply(const HeisenbergElement& x, const HeisenbergElement& y,
                                      const Conventions& conv = default_conventions());
HeisenbergElement heisenberg_inverse(const HeisenbergElement& x);
HeisenbergElement heisenberg_commutator(const HeisenbergElement& x, const HeisenbergElement& y,
                                        const Conventions& conv = default_conventions());

nlohmann::json to_json(const HeisenbergElement& h);

// rho_N(a, b) = exp(s i pi a b / N) U^a V^b on C^N, e_0 first. The integer
// representatives matter for the phase: rho(v + N w) = +-rho(v).
UnitaryOperator weyl_operator(std::int64_t N, std::int64_t a, std::int64_t b,
                              const Conventions& conv = default_conventions());

// rho(a,b) X and X rho(a,b) in O(N^2) (rho is monomial).
ComplexMatrix weyl_left(std::int64_t N, std::int64_t a, std::int64_t b, const ComplexMatrix& x,
                        const Conventions& conv = default_conventions());
ComplexMatrix weyl_right(const ComplexMatrix& x, std::int64_t N, std::int64_t a, std::int64_t b,
                         const Conventions& conv = default_conventions());

// psi(v, w) with rho(v) rho(w) = psi(v, w) rho(v + w), integer sum.
Complex weyl_cocycle(std::int64_t N, std::pair<std::int64_t, std::int64_t> v,
                     std::pair<std::int64_t, std::int64_t> w,
                     const Conventions& conv = default_conventions());

// (-1)^<m, n> for the splitting s(m, n) = (m, n, exp(i pi <m, n>)).
int splitting_sign(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& n);
Complex splitting_phase(const std::vector<std::int64_t>& m, const std::vector<std::int64_t>& n);

using WeylPair = std::pair<std::pair<std::int64_t, std::int64_t>,
                           std::pair<std::int64_t, std::int64_t>>;

// max over pairs of ||rho(v) rho(w) - psi(v,w) rho(v+w)||_max.
double projective_rep_check(std::int64_t N, const std::vector<WeylPair>& pairs,
                            const Conventions& conv = default_conventions());

}  // namespace catmap

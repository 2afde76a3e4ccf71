#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "catmap/quantizer.hpp"
#include "catmap/symplectic.hpp"
#include "catmap/unitary.hpp"

namespace catmap {

struct EigenDecomposition {
  std::vector<double> phases;  // sorted, in [0, 2 pi)
  ComplexMatrix vectors;       // orthonormal columns, same order as phases
  double max_residual = 0;     // max ||U v - lambda v||
  double max_modulus_deviation = 0;  // max ||lambda| - 1| before renormalizing
};

// Complex Schur form; for a normal matrix the Schur vectors are eigenvectors.
// NumericalFailureError (carrying the eigenpair index) when a residual
// exceeds `tol`.
EigenDecomposition eig_unitary(const UnitaryOperator& U, double tol = 1e-8);

struct PhaseCluster {
  double phase;
  std::size_t multiplicity;
};

// Groups sorted phases closer than `tol` (cyclically).
std::vector<PhaseCluster> multiplicities(const std::vector<double>& phases, double tol = 1e-6);

// |tr g| > 2 for 2 x 2 g.
bool is_hyperbolic(const IntegerSymplecticMatrix& g);

struct EquidistributionStats {
  std::vector<double> weyl_sums;  // |Tr U^k| / N, k = 1..k_max
  double star_discrepancy = 0;    // of the phases / 2 pi
  bool hyperbolic = false;
};

EquidistributionStats equidistribution_stats(const EigenDecomposition& eig, std::size_t k_max,
                                             bool hyperbolic);
EquidistributionStats equidistribution_stats(const IntegerSymplecticMatrix& g, std::int64_t N,
                                             std::size_t k_max,
                                             const QuantizeOptions& options = {});

double star_discrepancy(std::vector<double> unit_points);

struct QuantumPeriod {
  std::optional<std::uint64_t> period;
  std::optional<Complex> scalar_phase;
  double residual = 0;  // ||U^k - c I||_max at the reported period
};

// Least k <= cap with U^k = c I up to `tol`, confirmed on the matrix power.
QuantumPeriod quantum_period(const UnitaryOperator& U, const EigenDecomposition& eig,
                             std::uint64_t cap = 100'000, double tol = 1e-8);
QuantumPeriod quantum_period(const UnitaryOperator& U, std::uint64_t cap = 100'000,
                             double tol = 1e-8);

// "equal", "divides", "multiple" or "unrelated"; quantum relative to arithmetic.
std::string period_relation(std::uint64_t quantum, std::uint64_t arithmetic);

struct SpectralReport {
  IntegerSymplecticMatrix g;
  std::int64_t N;
  std::vector<double> eigenphases;
  std::vector<std::size_t> multiplicities;
  std::optional<std::uint64_t> quantum_period;
  std::optional<Complex> scalar_phase;
  double max_eigen_residual = 0;
  std::optional<std::uint64_t> arithmetic_period;
  std::string period_relation;
  Conventions conventions;
};

SpectralReport spectral_report(const QuantizedMap& q, std::uint64_t period_cap = 100'000);

nlohmann::json to_json(const SpectralReport& r);

// Phi^* rho(m0, n0) Phi: the observable in the eigenbasis.
ComplexMatrix observable_in_eigenbasis(const EigenDecomposition& eig, std::int64_t N,
                                       std::int64_t m0, std::int64_t n0,
                                       const Conventions& conv = default_conventions());

// (1/N) sum_j |<rho phi_j, phi_j>|^2.
double diagonal_variance(const ComplexMatrix& obs);

// (1/N) sum over i != j with |exp(i(theta_i - theta_j)) - exp(i tau)| <= delta
// of |<rho phi_i, phi_j>|^2. ParameterError when delta <= 0.
double offdiagonal_sum(const EigenDecomposition& eig, const ComplexMatrix& obs, double tau,
                       double delta);

// |(1/N) sum_{i,j} |obs_ij|^2 - 1|.
double parseval_defect(const ComplexMatrix& obs);

struct OffDiagonalEntry {
  double tau;
  double delta;
  double value;
};

struct ErgodicityReport {
  IntegerSymplecticMatrix g;
  std::int64_t N;
  std::pair<std::int64_t, std::int64_t> observable;
  double diagonal_variance = 0;
  std::vector<OffDiagonalEntry> offdiag_sums;
  double parseval_defect = 0;
};

// Rejects the (0, 0) observable with ParameterError.
ErgodicityReport ergodicity_variance(const QuantizedMap& q, std::int64_t m0, std::int64_t n0,
                                     const std::vector<std::pair<double, double>>& windows = {});

nlohmann::json to_json(const ErgodicityReport& r);

// Fraction of consecutive steps that decrease.
double decreasing_fraction(const std::vector<double>& values);

}  // namespace catmap

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

// A point of the upper half-plane; construction rejects Im tau <= 0.
class UpperHalfPlanePoint {
 public:
  explicit UpperHalfPlanePoint(Complex tau);
  Complex value() const { return tau_; }
  operator Complex() const { return tau_; }  // NOLINT: intended implicit use

 private:
  Complex tau_;
};

// e^{-pi N Im(tau) (R-1)^2}: modulus bound for the first omitted summand.
double theta_tail_bound(Complex tau, std::int64_t N, int R);

// Smallest R >= 4 whose tail bound is below 1e-20.
int default_truncation(Complex tau, std::int64_t N);

struct ThetaEvalParams {
  Complex tau;
  std::int64_t N = 1;
  std::int64_t mu = 0;
  int R = 0;  // 0 selects default_truncation
  ThetaGauge gauge = ThetaGauge::kSymmetric;
};

// Truncated lattice sum over 2R + 1 terms centred on the dominant gamma.
Complex theta_eval(const ThetaEvalParams& p, double x, double xi, double t);

// Point of the real Heisenberg group, (x,xi,t)(x',xi',t') =
// (x+x', xi+xi', t+t' + (x' xi - x xi')/2).
struct HeisPoint {
  double x = 0, xi = 0, t = 0;
};
HeisPoint heis_multiply(const HeisPoint& a, const HeisPoint& b);

// Integral element (p, q, s - p q / 2) with p, q, s integers.
HeisPoint integral_element(long long p, long long q, long long s);

// max |theta(n h) - theta(h)| over sampled h in [0,1)^3 and integral n with
// |p|, |q|, |s| <= 2.
double lattice_invariance_residual(const ThetaEvalParams& p, int samples,
                                   std::uint64_t seed = 7);

struct GaussianOverlap {
  Complex closed_form;  // 1 / sqrt(-i (tau - conj tau')), principal branch
  Complex quadrature;   // integral over R of exp(i/2 (tau - conj tau') s^2)
  Complex ratio() const { return quadrature / closed_form; }
};
GaussianOverlap gaussian_overlap(Complex tau, Complex tau2);

// quadrature / closed_form at tau = tau' = i: the one constant that
// separates the displayed overlap from the Lebesgue integral.
Complex gaussian_calibration_constant();

struct QuadratureOptions {
  int grid = 256;  // points per axis on [0,1)^2
  int R = 0;       // 0 selects default_truncation
  ThetaGauge gauge = ThetaGauge::kSymmetric;
};

// Periodic trapezoid value of the integral of theta^tau_mu conj(theta^tau'_mu')
// over [0,1]^2 (t drops out).
Complex theta_inner_product(Complex tau, Complex tau2, std::int64_t mu, std::int64_t mu2,
                            std::int64_t N, const QuadratureOptions& opts = {});

// All N x N inner products at once; entry (mu, mu').
ComplexMatrix theta_gram(Complex tau, Complex tau2, std::int64_t N,
                         const QuadratureOptions& opts = {});

// (-2 pi i N (tau - conj tau'))^{-1/2}. The real part of the radicand is
// positive, so the principal branch is the continuous one from tau' = tau.
Complex inner_product_closed_form(Complex tau, Complex tau2, std::int64_t N);

// (4 pi)^{1/2} (Im tau Im tau')^{1/4} / (-2 pi i (tau - conj tau'))^{1/2}.
Complex projector_composition_factor(Complex tau, Complex tau2, std::int64_t N);

// The same factor from a quadrature Gram matrix: G(tau,tau') normalized by
// the diagonal Gram norms at tau and tau'.
Complex projector_factor_from_gram(Complex tau, Complex tau2, std::int64_t N,
                                   const QuadratureOptions& opts = {});

struct TransformationFit {
  // U(alpha, mu): theta^tau_mu(g h) = sum_alpha U(alpha, mu) theta^tau'_alpha(h).
  ComplexMatrix U;
  Complex tau_prime;
  // Scalar s with U ~ s L, L the unimodular coefficient table of the law;
  // present when c = 0 or gcd(c, N) = 1.
  std::optional<Complex> nu;
  double residual = 0;          // max sample residual of the fitted law
  double condition_number = 0;  // of the sampled basis matrix
  std::size_t samples = 0;
};

// Least-squares fit of the theta transformation law at t = 0 with
// g (x, xi) = (a x + b xi, c x + d xi) and tau' = (d tau - b) / (-c tau + a).
// NumericalFailureError when the sample matrix is ill-conditioned.
TransformationFit fit_transformation_law(const IntegerSymplecticMatrix& g, std::int64_t N,
                                         Complex tau, int samples = 0, std::uint64_t seed = 11,
                                         ThetaGauge gauge = ThetaGauge::kSymmetric);

double transformation_law_residual(const IntegerSymplecticMatrix& g, std::int64_t N,
                                   Complex tau, int samples = 0);

// Unimodular coefficient table exp(i pi X / N) of the law, indexed
// (target, source). NotApplicableError unless c = 0 or gcd(c, N) = 1.
ComplexMatrix transformation_coefficients(const IntegerSymplecticMatrix& g, std::int64_t N);

struct VerificationReport {
  std::string check;
  nlohmann::json params;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};
nlohmann::json to_json(const VerificationReport& r);

}  // namespace catmap

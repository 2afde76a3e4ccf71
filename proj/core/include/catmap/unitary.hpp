#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace catmap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Largest entry modulus.
double max_abs(const ComplexMatrix& m);

// exp(i pi k / N) with k reduced mod 2N before the trigonometric call.
Complex root_of_unity_2n(long long k, long long N);

// The unit scalar c minimizing ||a - c b||_F (1 if <b, a> vanishes).
Complex best_phase(const ComplexMatrix& a, const ComplexMatrix& b);

// max |a - c b| after the optimal phase alignment above.
double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b);

// Dense square complex matrix together with ||U* U - I||_max measured at
// construction. Construction does not reject non-unitary input: callers
// compare the residual with their own tolerance.
class UnitaryOperator {
 public:
  explicit UnitaryOperator(ComplexMatrix m);

  static UnitaryOperator identity(std::size_t n);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  double unitarity_residual() const { return residual_; }
  bool is_unitary(double tol) const { return residual_ <= tol; }

  UnitaryOperator adjoint() const;
  UnitaryOperator scaled(Complex c) const;
  friend UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

 private:
  ComplexMatrix m_;
  double residual_ = 0.0;
};

double unitarity_residual(const ComplexMatrix& m);

// {"dim": N, "re": [...], "im": [...]} row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json to_json(const UnitaryOperator& u);
nlohmann::json to_json(Complex z);

}  // namespace catmap

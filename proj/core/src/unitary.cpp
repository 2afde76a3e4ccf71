#include "catmap/unitary.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "catmap/errors.hpp"

namespace catmap {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Complex root_of_unity_2n(long long k, long long N) {
  const long long two_n = 2 * N;
  long long r = k % two_n;
  if (r < 0) r += two_n;
  // Exact values at the quarter turns keep diagonal operators exact.
  if (r == 0) return {1.0, 0.0};
  if (2 * r == two_n) return {-1.0, 0.0};
  if (4 * r == two_n) return {0.0, 1.0};
  if (4 * r == 3 * two_n) return {0.0, -1.0};
  return std::polar(1.0, std::numbers::pi * static_cast<double>(r) / static_cast<double>(N));
}

Complex best_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex ip = (b.adjoint() * a).trace();
  const double r = std::abs(ip);
  if (r == 0.0) return {1.0, 0.0};
  return ip / r;
}

double phase_aligned_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("phase alignment of matrices with different shapes");
  return max_abs(a - best_phase(a, b) * b);
}

double unitarity_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("operator must be square");
  ComplexMatrix g = m.adjoint() * m;
  g.diagonal().array() -= 1.0;
  return max_abs(g);
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) : m_(std::move(m)) {
  residual_ = catmap::unitarity_residual(m_);
}

UnitaryOperator UnitaryOperator::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return UnitaryOperator(ComplexMatrix::Identity(k, k));
}

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(m_.adjoint()); }

UnitaryOperator UnitaryOperator::scaled(Complex c) const { return UnitaryOperator(c * m_); }

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator dimension mismatch");
  return UnitaryOperator(a.m_ * b.m_);
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

nlohmann::json to_json(const UnitaryOperator& u) { return matrix_to_json(u.matrix()); }

nlohmann::json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace catmap

#include "catmap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "catmap/errors.hpp"
#include "catmap/heisenberg.hpp"

namespace catmap {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double p) {
  double r = std::fmod(p, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

ComplexMatrix matrix_power(const ComplexMatrix& u, std::uint64_t k) {
  ComplexMatrix result = ComplexMatrix::Identity(u.rows(), u.cols());
  ComplexMatrix base = u;
  while (k) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k) base = base * base;
  }
  return result;
}

}  // namespace

EigenDecomposition eig_unitary(const UnitaryOperator& U, double tol) {
  const ComplexMatrix& u = U.matrix();
  const Eigen::Index n = u.rows();
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw NumericalFailureError("Schur iteration failed");
  const ComplexMatrix& q = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::vector<double> raw(static_cast<std::size_t>(n));
  EigenDecomposition out;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex lambda = t(i, i);
    out.max_modulus_deviation = std::max(out.max_modulus_deviation, std::abs(std::abs(lambda) - 1.0));
    raw[static_cast<std::size_t>(i)] = wrap_phase(std::arg(lambda));
  }
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return raw[static_cast<std::size_t>(a)] < raw[static_cast<std::size_t>(b)];
  });
  out.vectors.resize(n, n);
  out.phases.resize(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = order[static_cast<std::size_t>(k)];
    const double phase = raw[static_cast<std::size_t>(i)];
    out.phases[static_cast<std::size_t>(k)] = phase;
    out.vectors.col(k) = q.col(i);
    const double r = (u * q.col(i) - std::polar(1.0, phase) * q.col(i)).norm();
    out.max_residual = std::max(out.max_residual, r);
    if (r > tol)
      throw NumericalFailureError("eigenpair " + std::to_string(k) + " has residual " +
                                      std::to_string(r),
                                  static_cast<std::size_t>(k));
  }
  return out;
}

std::vector<PhaseCluster> multiplicities(const std::vector<double>& phases, double tol) {
  std::vector<PhaseCluster> out;
  double last = 0.0;
  for (double p : phases) {
    if (!out.empty() && p - last <= tol)
      ++out.back().multiplicity;
    else
      out.push_back({p, 1});
    last = p;
  }
  // cluster straddling phase 0
  if (out.size() > 1 && phases.front() + kTwoPi - phases.back() <= tol) {
    out.front().multiplicity += out.back().multiplicity;
    out.pop_back();
  }
  return out;
}

bool is_hyperbolic(const IntegerSymplecticMatrix& g) {
  const BigInt tr = g.matrix().trace();
  return tr > 2 || tr < -2;
}

double star_discrepancy(std::vector<double> unit_points) {
  if (unit_points.empty()) return 0.0;
  std::sort(unit_points.begin(), unit_points.end());
  const double n = static_cast<double>(unit_points.size());
  double d = 0.0;
  for (std::size_t j = 0; j < unit_points.size(); ++j) {
    const double u = unit_points[j];
    d = std::max({d, static_cast<double>(j + 1) / n - u, u - static_cast<double>(j) / n});
  }
  return d;
}

EquidistributionStats equidistribution_stats(const EigenDecomposition& eig, std::size_t k_max,
                                             bool hyperbolic) {
  EquidistributionStats s;
  s.hyperbolic = hyperbolic;
  const double n = static_cast<double>(eig.phases.size());
  for (std::size_t k = 1; k <= k_max; ++k) {
    Complex tr{0.0, 0.0};
    for (double p : eig.phases) tr += std::polar(1.0, static_cast<double>(k) * p);
    s.weyl_sums.push_back(std::abs(tr) / n);
  }
  std::vector<double> pts;
  pts.reserve(eig.phases.size());
  for (double p : eig.phases) pts.push_back(p / kTwoPi);
  s.star_discrepancy = star_discrepancy(std::move(pts));
  return s;
}

EquidistributionStats equidistribution_stats(const IntegerSymplecticMatrix& g, std::int64_t N,
                                             std::size_t k_max, const QuantizeOptions& options) {
  const QuantizedMap q = quantize(g, N, options);
  return equidistribution_stats(eig_unitary(q.U), k_max, is_hyperbolic(g));
}

QuantumPeriod quantum_period(const UnitaryOperator& U, const EigenDecomposition& eig,
                             std::uint64_t cap, double tol) {
  QuantumPeriod out;
  const ComplexMatrix& u = U.matrix();
  const auto n = static_cast<std::size_t>(u.rows());
  if (n == 0) return out;
  for (std::uint64_t k = 1; k <= cap; ++k) {
    // cheap screen on the spectrum: all k-th powers of eigenvalues coincide
    const double kd = static_cast<double>(k);
    const Complex first = std::polar(1.0, kd * eig.phases[0]);
    bool scalar = true;
    for (std::size_t j = 1; j < n && scalar; ++j)
      scalar = std::abs(std::polar(1.0, kd * eig.phases[j]) - first) <= 1e-6;
    if (!scalar) continue;
    const ComplexMatrix p = matrix_power(u, k);
    const Complex c = p.trace() / static_cast<double>(n);
    const Complex unit = c / std::abs(c);
    ComplexMatrix diff = p;
    diff.diagonal().array() -= unit;
    const double r = max_abs(diff);
    if (r <= tol) {
      out.period = k;
      out.scalar_phase = unit;
      out.residual = r;
      return out;
    }
  }
  return out;
}

QuantumPeriod quantum_period(const UnitaryOperator& U, std::uint64_t cap, double tol) {
  return quantum_period(U, eig_unitary(U), cap, tol);
}

std::string period_relation(std::uint64_t quantum, std::uint64_t arithmetic) {
  if (quantum == arithmetic) return "equal";
  if (arithmetic % quantum == 0) return "divides";
  if (quantum % arithmetic == 0) return "multiple";
  return "unrelated";
}

SpectralReport spectral_report(const QuantizedMap& q, std::uint64_t period_cap) {
  const EigenDecomposition eig = eig_unitary(q.U);
  SpectralReport r{q.g, q.N, eig.phases, {}, std::nullopt, std::nullopt, eig.max_residual,
                   std::nullopt, "", q.conventions};
  for (const PhaseCluster& c : multiplicities(eig.phases)) r.multiplicities.push_back(c.multiplicity);
  const QuantumPeriod qp = quantum_period(q.U, eig, period_cap);
  r.quantum_period = qp.period;
  r.scalar_phase = qp.scalar_phase;
  try {
    r.arithmetic_period = arithmetic_period(q.g, q.N, period_cap);
  } catch (const PeriodNotFoundError&) {
  }
  if (r.quantum_period && r.arithmetic_period)
    r.period_relation = period_relation(*r.quantum_period, *r.arithmetic_period);
  return r;
}

nlohmann::json to_json(const SpectralReport& r) {
  nlohmann::json j = {{"g", to_json(r.g)},
                      {"N", r.N},
                      {"eigenphases", r.eigenphases},
                      {"multiplicities", r.multiplicities},
                      {"max_eigen_residual", r.max_eigen_residual},
                      {"conventions", to_json(r.conventions)}};
  j["quantum_period"] = r.quantum_period ? nlohmann::json(*r.quantum_period) : nlohmann::json();
  j["scalar_phase"] = r.scalar_phase ? to_json(*r.scalar_phase) : nlohmann::json();
  j["arithmetic_period"] =
      r.arithmetic_period ? nlohmann::json(*r.arithmetic_period) : nlohmann::json();
  j["period_relation"] = r.period_relation;
  return j;
}

ComplexMatrix observable_in_eigenbasis(const EigenDecomposition& eig, std::int64_t N,
                                       std::int64_t m0, std::int64_t n0,
                                       const Conventions& conv) {
  if (eig.vectors.rows() != N) throw DimensionError("eigenbasis size differs from N");
  return eig.vectors.adjoint() * weyl_left(N, m0, n0, eig.vectors, conv);
}

double diagonal_variance(const ComplexMatrix& obs) {
  return obs.diagonal().squaredNorm() / static_cast<double>(obs.rows());
}

double offdiagonal_sum(const EigenDecomposition& eig, const ComplexMatrix& obs, double tau,
                       double delta) {
  if (!(delta > 0.0)) throw ParameterError("window width delta must be positive");
  const Eigen::Index n = obs.rows();
  const Complex shift = std::polar(1.0, tau);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gap = eig.phases[static_cast<std::size_t>(i)] -
                         eig.phases[static_cast<std::size_t>(j)];
      if (std::abs(std::polar(1.0, gap) - shift) > delta) continue;
      // obs(j, i) = <rho phi_i, phi_j>
      acc += std::norm(obs(j, i));
    }
  return acc / static_cast<double>(n);
}

double parseval_defect(const ComplexMatrix& obs) {
  return std::abs(obs.squaredNorm() / static_cast<double>(obs.rows()) - 1.0);
}

ErgodicityReport ergodicity_variance(const QuantizedMap& q, std::int64_t m0, std::int64_t n0,
                                     const std::vector<std::pair<double, double>>& windows) {
  if (m0 == 0 && n0 == 0)
    throw ParameterError("observable (0, 0) has average 1; choose a nonzero frequency");
  const EigenDecomposition eig = eig_unitary(q.U);
  const ComplexMatrix obs = observable_in_eigenbasis(eig, q.N, m0, n0, q.conventions);
  ErgodicityReport r{q.g, q.N, {m0, n0}, diagonal_variance(obs), {}, parseval_defect(obs)};
  for (const auto& [tau, delta] : windows)
    r.offdiag_sums.push_back({tau, delta, offdiagonal_sum(eig, obs, tau, delta)});
  return r;
}

nlohmann::json to_json(const ErgodicityReport& r) {
  nlohmann::json sums = nlohmann::json::array();
  for (const auto& e : r.offdiag_sums)
    sums.push_back({{"tau", e.tau}, {"delta", e.delta}, {"value", e.value}});
  return {{"g", to_json(r.g)},
          {"N", r.N},
          {"observable", {r.observable.first, r.observable.second}},
          {"diagonal_variance", r.diagonal_variance},
          {"offdiag_sums", std::move(sums)},
          {"parseval_defect", r.parseval_defect}};
}

double decreasing_fraction(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  std::size_t dec = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[i - 1]) ++dec;
  return static_cast<double>(dec) / static_cast<double>(values.size() - 1);
}

}  // namespace catmap

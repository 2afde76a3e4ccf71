#include "catmap/theta.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <Eigen/SVD>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "catmap/errors.hpp"
#include "catmap/quantizer.hpp"

namespace catmap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void check_tau(Complex tau) {
  if (!(tau.imag() > 0.0))
    throw ParameterError("tau must lie in the upper half-plane, got Im tau = " +
                         std::to_string(tau.imag()));
}

void check_degree(std::int64_t N) {
  if (N < 1) throw ParameterError("degree N must be positive");
}

std::int64_t mod(std::int64_t v, std::int64_t m) {
  std::int64_t r = v % m;
  return r < 0 ? r + m : r;
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Complex act_on_tau(const IntegerSymplecticMatrix& g, Complex tau) {
  const auto [a, b, c, d] = g.entries2();
  return (static_cast<double>(d) * tau - static_cast<double>(b)) /
         (-static_cast<double>(c) * tau + static_cast<double>(a));
}

// Values of theta^tau_mu on the grid j/M, k/M, row-major in (x, xi).
std::vector<Complex> grid_values(Complex tau, std::int64_t N, std::int64_t mu,
                                 const QuadratureOptions& opts) {
  const int m = opts.grid;
  std::vector<Complex> out(static_cast<std::size_t>(m) * m);
  const ThetaEvalParams p{tau, N, mu, opts.R, opts.gauge};
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k)
      out[static_cast<std::size_t>(j) * m + k] =
          theta_eval(p, static_cast<double>(j) / m, static_cast<double>(k) / m, 0.0);
  return out;
}

}  // namespace

UpperHalfPlanePoint::UpperHalfPlanePoint(Complex tau) : tau_(tau) { check_tau(tau); }

double theta_tail_bound(Complex tau, std::int64_t N, int R) {
  check_tau(tau);
  const double r = static_cast<double>(R - 1);
  return std::exp(-kPi * static_cast<double>(N) * tau.imag() * r * r);
}

int default_truncation(Complex tau, std::int64_t N) {
  check_tau(tau);
  check_degree(N);
  int R = 4;
  while (theta_tail_bound(tau, N, R) > 1e-20) ++R;
  return R;
}

Complex theta_eval(const ThetaEvalParams& p, double x, double xi, double t) {
  check_tau(p.tau);
  check_degree(p.N);
  const int R = p.R > 0 ? p.R : default_truncation(p.tau, p.N);
  const double n = static_cast<double>(p.N);
  const double shift = static_cast<double>(mod(p.mu, p.N)) / n;
  const double sign_xi = (p.gauge == ThetaGauge::kMixedLinear) ? 1.0 : -1.0;
  const auto centre = static_cast<long long>(std::llround(-sign_xi * xi - shift));
  Complex sum{0.0, 0.0};
  for (long long gamma = centre - R; gamma <= centre + R; ++gamma) {
    const double g = static_cast<double>(gamma);
    const double arg = sign_xi * xi + shift + g;
    double lin = 0.0;
    switch (p.gauge) {
      case ThetaGauge::kSymmetric:
        lin = (g + shift) * x;
        break;
      case ThetaGauge::kMixedLinear:
        lin = (shift * xi + g) * x;
        break;
      case ThetaGauge::kReflected:
        lin = (shift - xi + g) * x;
        break;
    }
    // 2 pi i N [tau/2 arg^2 + lin]
    const Complex e = kI * kPi * n * (p.tau * arg * arg + 2.0 * lin);
    sum += std::exp(e);
  }
  double phase = -2.0 * kPi * n * t;
  if (p.gauge == ThetaGauge::kSymmetric) phase -= kPi * n * x * xi;
  return std::polar(1.0, phase) * sum;
}

HeisPoint heis_multiply(const HeisPoint& a, const HeisPoint& b) {
  return {a.x + b.x, a.xi + b.xi, a.t + b.t + 0.5 * (b.x * a.xi - a.x * b.xi)};
}

HeisPoint integral_element(long long p, long long q, long long s) {
  const double pd = static_cast<double>(p), qd = static_cast<double>(q);
  return {pd, qd, static_cast<double>(s) - 0.5 * pd * qd};
}

double lattice_invariance_residual(const ThetaEvalParams& p, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const HeisPoint h{uniform01(rng), uniform01(rng), uniform01(rng)};
    const Complex base = theta_eval(p, h.x, h.xi, h.t);
    for (long long a = -2; a <= 2; ++a)
      for (long long b = -2; b <= 2; ++b)
        for (long long s = -1; s <= 1; ++s) {
          const HeisPoint nh = heis_multiply(integral_element(a, b, s), h);
          worst = std::max(worst, std::abs(theta_eval(p, nh.x, nh.xi, nh.t) - base));
        }
  }
  return worst;
}

GaussianOverlap gaussian_overlap(Complex tau, Complex tau2) {
  check_tau(tau);
  check_tau(tau2);
  const Complex diff = tau - std::conj(tau2);
  GaussianOverlap out;
  out.closed_form = 1.0 / std::sqrt(-kI * diff);
  // exp(i/2 diff s^2) = exp(-q s^2 / 2) (cos + i sin)(p s^2 / 2)
  const double p = diff.real(), q = diff.imag();
  using boost::math::quadrature::gauss_kronrod;
  const double inf = std::numeric_limits<double>::infinity();
  auto re = [&](double s) { return std::exp(-0.5 * q * s * s) * std::cos(0.5 * p * s * s); };
  auto im = [&](double s) { return std::exp(-0.5 * q * s * s) * std::sin(0.5 * p * s * s); };
  const double vr = gauss_kronrod<double, 61>::integrate(re, -inf, inf, 15, 1e-14);
  const double vi = gauss_kronrod<double, 61>::integrate(im, -inf, inf, 15, 1e-14);
  out.quadrature = {vr, vi};
  return out;
}

Complex gaussian_calibration_constant() {
  return gaussian_overlap(kI, kI).ratio();
}

Complex theta_inner_product(Complex tau, Complex tau2, std::int64_t mu, std::int64_t mu2,
                            std::int64_t N, const QuadratureOptions& opts) {
  check_degree(N);
  if (opts.grid < 2) throw ParameterError("quadrature grid must have at least 2 points");
  const auto f = grid_values(tau, N, mu, opts);
  const auto h = grid_values(tau2, N, mu2, opts);
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * std::conj(h[i]);
  return acc / static_cast<double>(f.size());
}

ComplexMatrix theta_gram(Complex tau, Complex tau2, std::int64_t N,
                         const QuadratureOptions& opts) {
  check_degree(N);
  if (opts.grid < 2) throw ParameterError("quadrature grid must have at least 2 points");
  std::vector<std::vector<Complex>> left, right;
  for (std::int64_t mu = 0; mu < N; ++mu) {
    left.push_back(grid_values(tau, N, mu, opts));
    right.push_back(tau2 == tau ? left.back() : grid_values(tau2, N, mu, opts));
  }
  ComplexMatrix g(N, N);
  const double count = static_cast<double>(left[0].size());
  for (std::int64_t i = 0; i < N; ++i)
    for (std::int64_t j = 0; j < N; ++j) {
      Complex acc{0.0, 0.0};
      const auto& f = left[static_cast<std::size_t>(i)];
      const auto& h = right[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < f.size(); ++k) acc += f[k] * std::conj(h[k]);
      g(i, j) = acc / count;
    }
  return g;
}

Complex inner_product_closed_form(Complex tau, Complex tau2, std::int64_t N) {
  check_tau(tau);
  check_tau(tau2);
  check_degree(N);
  return 1.0 / std::sqrt(-2.0 * kPi * kI * static_cast<double>(N) * (tau - std::conj(tau2)));
}

Complex projector_composition_factor(Complex tau, Complex tau2, std::int64_t N) {
  check_tau(tau);
  check_tau(tau2);
  check_degree(N);
  return std::sqrt(4.0 * kPi) * std::pow(tau.imag() * tau2.imag(), 0.25) /
         std::sqrt(-2.0 * kPi * kI * (tau - std::conj(tau2)));
}

Complex projector_factor_from_gram(Complex tau, Complex tau2, std::int64_t N,
                                   const QuadratureOptions& opts) {
  const Complex cross = theta_inner_product(tau, tau2, 0, 0, N, opts);
  const double n1 = theta_inner_product(tau, tau, 0, 0, N, opts).real();
  const double n2 = theta_inner_product(tau2, tau2, 0, 0, N, opts).real();
  return cross / std::sqrt(n1 * n2);
}

ComplexMatrix transformation_coefficients(const IntegerSymplecticMatrix& g, std::int64_t N) {
  check_degree(N);
  const auto [a, b, c, d] = g.entries2();
  (void)d;
  if (c != 0) return quantize_transformation_law(reflect(g), N).matrix() *
                     std::sqrt(static_cast<double>(N));
  // c = 0 forces a = d = +-1: the law permutes mu -> a mu with a diagonal phase.
  const std::int64_t two_n = 2 * N;
  const std::int64_t scale_x = (N % 2 == 0) ? 1 : N + 1;
  ComplexMatrix l = ComplexMatrix::Zero(N, N);
  for (std::int64_t mu = 0; mu < N; ++mu) {
    const std::int64_t x = mod(mod(a * b, two_n) * mod(mu * mu, two_n), two_n) * scale_x % two_n;
    l(mod(a * mu, N), mu) = root_of_unity_2n(x, N);
  }
  return l;
}

TransformationFit fit_transformation_law(const IntegerSymplecticMatrix& g, std::int64_t N,
                                         Complex tau, int samples, std::uint64_t seed,
                                         ThetaGauge gauge) {
  check_tau(tau);
  check_degree(N);
  const auto [a, b, c, d] = g.entries2();
  const Complex tau_prime = act_on_tau(g, tau);
  const int m = samples > 0 ? samples : static_cast<int>(std::max<std::int64_t>(4 * N + 16, 24));
  if (m < N) throw ParameterError("need at least N sample points");

  std::mt19937_64 rng(seed);
  ComplexMatrix basis(m, N), target(m, N);
  for (int s = 0; s < m; ++s) {
    const double x = uniform01(rng), xi = uniform01(rng);
    const double gx = static_cast<double>(a) * x + static_cast<double>(b) * xi;
    const double gxi = static_cast<double>(c) * x + static_cast<double>(d) * xi;
    for (std::int64_t mu = 0; mu < N; ++mu) {
      basis(s, mu) = theta_eval({tau_prime, N, mu, 0, gauge}, x, xi, 0.0);
      target(s, mu) = theta_eval({tau, N, mu, 0, gauge}, gx, gxi, 0.0);
    }
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1)
                                             : std::numeric_limits<double>::infinity();
  if (!(cond < 1e10))
    throw NumericalFailureError("theta sample matrix is ill-conditioned; resample");

  TransformationFit fit;
  fit.U = svd.solve(target);
  fit.tau_prime = tau_prime;
  fit.residual = max_abs(basis * fit.U - target);
  fit.condition_number = cond;
  fit.samples = static_cast<std::size_t>(m);
  if (c == 0 || std::gcd(mod(c, N), N) == 1) {
    const ComplexMatrix l = transformation_coefficients(g, N);
    fit.nu = (l.adjoint() * fit.U).trace() / (l.adjoint() * l).trace();
  }
  return fit;
}

double transformation_law_residual(const IntegerSymplecticMatrix& g, std::int64_t N,
                                   Complex tau, int samples) {
  return fit_transformation_law(g, N, tau, samples).residual;
}

nlohmann::json to_json(const VerificationReport& r) {
  return {{"check", r.check},
          {"params", r.params},
          {"residual", r.residual},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

}  // namespace catmap

#include "seqtest/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace seqtest {

namespace {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
// Jacobi matrix of the orthogonal-polynomial recurrence, weights are
// mu0 * (first eigenvector component)^2.
QuadratureRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
  const std::size_t n = offdiag.size() + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    jacobi(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = offdiag[k];
    jacobi(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = offdiag[k];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("quadrature: eigen decomposition failed");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    const double q0 = solver.eigenvectors()(0, static_cast<Eigen::Index>(i));
    rule.weights[i] = mu0 * q0 * q0;
  }
  return rule;
}

const QuadratureRule& cached_rule(std::map<std::size_t, QuadratureRule>& cache, std::mutex& mutex,
                                  std::size_t n, QuadratureRule (*build)(std::size_t)) {
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build(n)).first;
  return it->second;
}

QuadratureRule build_hermite(std::size_t n) {
  std::vector<double> offdiag(n - 1);
  for (std::size_t k = 1; k < n; ++k) offdiag[k - 1] = std::sqrt(static_cast<double>(k) / 2.0);
  return golub_welsch(offdiag, std::sqrt(std::numbers::pi));
}

QuadratureRule build_legendre(std::size_t n) {
  std::vector<double> offdiag(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    offdiag[k - 1] = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  return golub_welsch(offdiag, 2.0);
}

}  // namespace

const QuadratureRule& gauss_hermite(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  static std::map<std::size_t, QuadratureRule> cache;
  static std::mutex mutex;
  return cached_rule(cache, mutex, n, build_hermite);
}

const QuadratureRule& gauss_legendre(std::size_t n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<std::size_t, QuadratureRule> cache;
  static std::mutex mutex;
  return cached_rule(cache, mutex, n, build_legendre);
}

double gaussian_expectation(const std::function<double(double)>& f, std::size_t n) {
  const auto& rule = gauss_hermite(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(std::numbers::sqrt2 * rule.nodes[i]);
  return sum / std::sqrt(std::numbers::pi);
}

double integrate(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(half * rule.nodes[i] + mid);
  return half * sum;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

}  // namespace seqtest

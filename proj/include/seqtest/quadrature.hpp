#ifndef SEQTEST_QUADRATURE_HPP
#define SEQTEST_QUADRATURE_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace seqtest {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for integrals against exp(-x^2); sum(weights) = sqrt(pi).
const QuadratureRule& gauss_hermite(std::size_t n);

/// Gauss-Legendre rule on [-1, 1]; sum(weights) = 2.
const QuadratureRule& gauss_legendre(std::size_t n);

/// E[f(U)] for U ~ N(0,1), by an n-node Gauss-Hermite rule.
double gaussian_expectation(const std::function<double(double)>& f, std::size_t n = 64);

/// Integral of f over [a, b] by an n-node Gauss-Legendre rule.
double integrate(const std::function<double(double)>& f, double a, double b, std::size_t n = 128);

/// Standard normal CDF.
double normal_cdf(double x);

}  // namespace seqtest

#endif

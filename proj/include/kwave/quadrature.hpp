// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_QUADRATURE_HPP
#define KWAVE_QUADRATURE_HPP

#include <array>
#include <functional>
#include <limits>
#include <vector>

namespace kwave
{

struct Rule1D
{
  std::vector<double> x;  // on [0, 1]
  std::vector<double> w;  // sums to 1
};

// Reference triangle {(s, t): s, t >= 0, s + t <= 1}; weights sum to 1/2.
struct RuleTriangle
{
  std::vector<std::array<double, 2>> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre rule, exact for polynomials of degree 2n - 1.
Rule1D GaussLegendre(int n);

// Collapsed (Duffy) product of (n+1)- and n-point Gauss rules, exact for total degree
// 2n - 1.
RuleTriangle CollapsedTriangleRule(int n);

// Adaptive Gauss-Kronrod integration of f over [a, b]; b may be +infinity.
double Integrate(const std::function<double(double)> &f, double a, double b,
                 double rel_tol = 1e-12);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace kwave

#endif  // KWAVE_QUADRATURE_HPP

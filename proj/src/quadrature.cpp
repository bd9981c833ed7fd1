// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/quadrature.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "kwave/error.hpp"

namespace kwave
{

Rule1D GaussLegendre(int n)
{
  Require(n >= 1, ErrorCode::InvalidArgument, "Gauss rule needs at least one point");
  Rule1D rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double pi = boost::math::constants::pi<double>();
  // Newton iteration on P_n from the Chebyshev-like initial guess.
  for (int i = 0; i < (n + 1) / 2; i++)
  {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; it++)
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; k++)
      {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1)
      {
        p0 = 1.0;
        p1 = z;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
      {
        break;
      }
    }
    if (n == 1)
    {
      z = 0.0;
      dp = 1.0;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] to [0, 1].
    rule.x[i] = 0.5 * (1.0 - z);
    rule.x[n - 1 - i] = 0.5 * (1.0 + z);
    rule.w[i] = rule.w[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

RuleTriangle CollapsedTriangleRule(int n)
{
  // (u, v) in [0,1]^2 -> (s, t) = (u, v (1 - u)), Jacobian (1 - u).
  const Rule1D g = GaussLegendre(n + 1);
  const Rule1D h = GaussLegendre(n);
  RuleTriangle rule;
  for (size_t i = 0; i < g.x.size(); i++)
  {
    for (size_t j = 0; j < h.x.size(); j++)
    {
      const double u = g.x[i], v = h.x[j];
      rule.x.push_back({u, v * (1.0 - u)});
      rule.w.push_back(g.w[i] * h.w[j] * (1.0 - u));
    }
  }
  return rule;
}

double Integrate(const std::function<double(double)> &f, double a, double b, double rel_tol)
{
  if (a == b)
  {
    return 0.0;
  }
  double err = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol,
                                                                       &err);
}

}  // namespace kwave

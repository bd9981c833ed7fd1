// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/kernels.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "kwave/error.hpp"
#include "kwave/quadrature.hpp"

namespace kwave
{

std::string ToString(RateFamily f)
{
  switch (f)
  {
    case RateFamily::Constant:
      return "constant";
    case RateFamily::PowerLaw:
      return "power_law";
    case RateFamily::OscillatoryPerturbed:
      return "oscillatory";
  }
  return "?";
}

RateFamily RateFamilyFromString(const std::string &name)
{
  if (name == "constant")
  {
    return RateFamily::Constant;
  }
  if (name == "power_law")
  {
    return RateFamily::PowerLaw;
  }
  if (name == "oscillatory")
  {
    return RateFamily::OscillatoryPerturbed;
  }
  throw Error(ErrorCode::Validation, "unknown kernel family '" + name + "'");
}

RateFunction RateFunction::Constant(double alpha)
{
  Require(alpha > 0.0, ErrorCode::Validation, "kernel.alpha must be positive");
  return RateFunction(RateFamily::Constant, alpha, 0.0);
}

RateFunction RateFunction::PowerLaw(double alpha)
{
  Require(alpha > 0.0, ErrorCode::Validation, "kernel.alpha must be positive");
  return RateFunction(RateFamily::PowerLaw, alpha, 0.0);
}

RateFunction RateFunction::OscillatoryPerturbed(double alpha, double eps)
{
  Require(alpha > 0.0, ErrorCode::Validation, "kernel.alpha must be positive");
  Require(eps >= 0.0 && eps < 1.0, ErrorCode::Validation,
          "kernel.epsilon must lie in [0, 1)");
  return RateFunction(RateFamily::OscillatoryPerturbed, alpha, eps);
}

double RateFunction::Xi(double t) const
{
  switch (family_)
  {
    case RateFamily::Constant:
      return alpha_;
    case RateFamily::PowerLaw:
      return alpha_ / (1.0 + t);
    case RateFamily::OscillatoryPerturbed:
      return alpha_ * (1.0 + eps_ * std::exp(-t) * std::sin(t));
  }
  return 0.0;
}

double RateFunction::XiPrime(double t) const
{
  switch (family_)
  {
    case RateFamily::Constant:
      return 0.0;
    case RateFamily::PowerLaw:
      return -alpha_ / ((1.0 + t) * (1.0 + t));
    case RateFamily::OscillatoryPerturbed:
      return alpha_ * eps_ * std::exp(-t) * (std::cos(t) - std::sin(t));
  }
  return 0.0;
}

double RateFunction::Phi(double t) const
{
  switch (family_)
  {
    case RateFamily::Constant:
      return alpha_ * t;
    case RateFamily::PowerLaw:
      return alpha_ * std::log1p(t);
    case RateFamily::OscillatoryPerturbed:
      // int_0^t e^{-s} sin s ds = (1 - e^{-t} (sin t + cos t)) / 2
      return alpha_ * t +
             0.5 * alpha_ * eps_ * (1.0 - std::exp(-t) * (std::sin(t) + std::cos(t)));
  }
  return 0.0;
}

double RateFunction::ClaimedR() const
{
  if (family_ == RateFamily::OscillatoryPerturbed)
  {
    return std::log((1.0 + eps_) / (1.0 - eps_));
  }
  return 0.0;
}

double RateFunction::TailSup(double h) const
{
  switch (family_)
  {
    case RateFamily::Constant:
      return alpha_;
    case RateFamily::PowerLaw:
      return Xi(h);
    case RateFamily::OscillatoryPerturbed:
      return alpha_ * (1.0 + eps_ * std::exp(-h));
  }
  return 0.0;
}

double RateFunction::TailInf(double h) const
{
  switch (family_)
  {
    case RateFamily::Constant:
      return alpha_;
    case RateFamily::PowerLaw:
      return 0.0;
    case RateFamily::OscillatoryPerturbed:
      return alpha_ * (1.0 - eps_ * std::exp(-h));
  }
  return 0.0;
}

double RateFunction::TailRatioBound(double h) const
{
  if (family_ == RateFamily::OscillatoryPerturbed)
  {
    return TailSup(h) / TailInf(h);
  }
  // Nonincreasing xi.
  return 1.0;
}

double RateFunction::TailXiPrimeIntegral(double h, double theta) const
{
  switch (family_)
  {
    case RateFamily::Constant:
      return 0.0;
    case RateFamily::PowerLaw:
      if (theta >= 1.0)
      {
        return std::numeric_limits<double>::infinity();
      }
      return std::pow(alpha_, 1.0 - theta) * std::pow(1.0 + h, theta - 1.0) / (1.0 - theta);
    case RateFamily::OscillatoryPerturbed:
      // |xi'| <= alpha eps sqrt(2) e^{-t} and xi >= alpha (1 - eps).
      return alpha_ * eps_ * std::sqrt(2.0) * std::exp(-h) /
             std::pow(alpha_ * (1.0 - eps_), theta);
  }
  return 0.0;
}

RelaxationKernel RelaxationKernel::Zero(double a)
{
  RelaxationKernel k(RateFunction::Constant(1.0), 0.0, a);
  k.zero_ = true;
  k.tail_mass_ = 0.0;
  return k;
}

double RelaxationKernel::G(double t) const
{
  if (zero_)
  {
    return 0.0;
  }
  switch (rate_.family())
  {
    case RateFamily::Constant:
      return g0_ * std::exp(-rate_.alpha() * t);
    case RateFamily::PowerLaw:
      return g0_ * std::pow(1.0 + t, -rate_.alpha());
    case RateFamily::OscillatoryPerturbed:
      return g0_ * std::exp(-rate_.Phi(t));
  }
  return 0.0;
}

double RelaxationKernel::GPrime(double t) const
{
  if (zero_)
  {
    return 0.0;
  }
  const double alpha = rate_.alpha();
  switch (rate_.family())
  {
    case RateFamily::Constant:
      return -alpha * g0_ * std::exp(-alpha * t);
    case RateFamily::PowerLaw:
      return -alpha * g0_ * std::pow(1.0 + t, -alpha - 1.0);
    case RateFamily::OscillatoryPerturbed:
      return -rate_.Xi(t) * G(t);
  }
  return 0.0;
}

double RelaxationKernel::Integral(double t) const
{
  if (zero_ || t <= 0.0)
  {
    return 0.0;
  }
  const double alpha = rate_.alpha();
  switch (rate_.family())
  {
    case RateFamily::Constant:
      return -g0_ * std::expm1(-alpha * t) / alpha;
    case RateFamily::PowerLaw:
      return g0_ * (1.0 - std::pow(1.0 + t, 1.0 - alpha)) / (alpha - 1.0);
    case RateFamily::OscillatoryPerturbed:
      return Integrate([this](double s) { return G(s); }, 0.0, t, 1e-13);
  }
  return 0.0;
}

RelaxationKernel BuildKernel(const RateFunction &rate, double g0, double a)
{
  Require(g0 > 0.0, ErrorCode::Validation, "kernel.g0 must be positive (H2)");
  Require(a > 0.0, ErrorCode::Validation, "physics.a must be positive");
  RelaxationKernel k(rate, g0, a);
  const double alpha = rate.alpha();
  switch (rate.family())
  {
    case RateFamily::Constant:
      k.tail_mass_ = g0 / alpha;
      break;
    case RateFamily::PowerLaw:
      if (alpha <= 1.0)
      {
        throw Error(ErrorCode::Hypothesis,
                    "(H2) violated: power-law kernel with alpha <= 1 has infinite tail mass");
      }
      k.tail_mass_ = g0 / (alpha - 1.0);
      break;
    case RateFamily::OscillatoryPerturbed:
      k.tail_mass_ = Integrate([&k](double s) { return k.G(s); }, 0.0, kInf, 1e-13);
      break;
  }
  if (!(k.L() > 0.0))
  {
    std::ostringstream os;
    os << "(H2) violated: l = a - int_0^inf g = " << k.L() << " must be positive (a = " << a
       << ", tail mass = " << k.tail_mass_ << ")";
    throw Error(ErrorCode::Hypothesis, os.str());
  }
  return k;
}

double TailFrom(const RelaxationKernel &kernel, double t0)
{
  Require(t0 > 0.0, ErrorCode::InvalidArgument, "t0 must be positive");
  return kernel.Integral(t0);
}

double TimeForMassFraction(const RelaxationKernel &kernel, double fraction)
{
  Require(!kernel.IsZero(), ErrorCode::InvalidArgument, "zero kernel has no mass");
  Require(fraction > 0.0 && fraction < 1.0, ErrorCode::InvalidArgument,
          "mass fraction must lie in (0, 1)");
  const double alpha = kernel.rate().alpha();
  switch (kernel.rate().family())
  {
    case RateFamily::Constant:
      return -std::log1p(-fraction) / alpha;
    case RateFamily::PowerLaw:
      return std::pow(1.0 - fraction, 1.0 / (1.0 - alpha)) - 1.0;
    case RateFamily::OscillatoryPerturbed:
      break;
  }
  const double target = fraction * kernel.TailMass();
  auto f = [&](double t) { return kernel.Integral(t) - target; };
  double hi = 1.0;
  while (f(hi) < 0.0)
  {
    hi *= 2.0;
  }
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto [lo_t, hi_t] = boost::math::tools::toms748_solve(f, 0.0, hi, tol, iters);
  return 0.5 * (lo_t + hi_t);
}

bool HypothesisReport::AllPass() const
{
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict &v) { return v.pass; });
}

const Verdict *HypothesisReport::Find(const std::string &name) const
{
  for (const auto &v : verdicts)
  {
    if (v.name == name)
    {
      return &v;
    }
  }
  return nullptr;
}

std::vector<double> CheckGrid(double horizon, int uniform, int geometric)
{
  std::vector<double> grid;
  grid.reserve(uniform + geometric + 2);
  for (int i = 0; i <= uniform; i++)
  {
    grid.push_back(horizon * i / uniform);
  }
  const double t_min = std::min(1e-6, horizon * 1e-6);
  for (int i = 0; i < geometric; i++)
  {
    grid.push_back(t_min * std::pow(horizon / t_min, static_cast<double>(i) / (geometric - 1)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  grid.back() = horizon;
  return grid;
}

HypothesisReport ValidateHypotheses(const RelaxationKernel &kernel,
                                    const BoundaryCoefficients &coeffs, double horizon)
{
  Require(horizon > 0.0, ErrorCode::InvalidArgument, "horizon must be positive");
  HypothesisReport rep;
  rep.horizon = horizon;
  const auto &rate = kernel.rate();
  const auto grid = CheckGrid(horizon);
  rep.grid_points = static_cast<int>(grid.size());
  constexpr double kRelTol = 1e-12;

  auto add = [&rep](std::string name, bool pass, std::string detail) {
    rep.verdicts.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    std::ostringstream os;
    os << "p = " << coeffs.p << ", q = " << coeffs.q;
    add("H1", coeffs.p > 0.0 && coeffs.q > 0.0 && std::isfinite(coeffs.p) &&
                  std::isfinite(coeffs.q),
        os.str());
  }

  rep.l = kernel.L();
  {
    std::ostringstream os;
    os << "g(0) = " << kernel.g0() << ", l = " << rep.l;
    add("H2.l", kernel.g0() > 0.0 && rep.l > 0.0, os.str());
  }

  // xi > 0 on the grid and int xi diverges (every family has Phi >= c t or alpha ln(1+t)).
  bool xi_positive = true;
  for (double t : grid)
  {
    xi_positive = xi_positive && rate.Xi(t) > 0.0;
  }
  xi_positive = xi_positive && rate.TailInf(horizon) >= 0.0;
  {
    std::ostringstream os;
    os << "Phi(horizon) = " << rate.Phi(horizon) << ", family " << ToString(rate.family());
    add("H2.xi_divergent", xi_positive && rate.Phi(horizon) > 0.0, os.str());
  }

  // g' = -xi g on the grid, g positive and nonincreasing.
  double max_err = 0.0;
  bool g_ok = true;
  double prev = kernel.G(0.0);
  for (double t : grid)
  {
    const double g = kernel.G(t);
    const double lhs = kernel.GPrime(t);
    const double rhs = -rate.Xi(t) * g;
    const double scale = std::max(std::abs(rhs), std::numeric_limits<double>::min());
    max_err = std::max(max_err, std::abs(lhs - rhs) / scale);
    g_ok = g_ok && g > 0.0 && g <= prev;
    prev = g;
  }
  rep.max_g_identity_error = max_err;
  add("H2.g_prime", g_ok && max_err <= kRelTol, "max relative |g' + xi g| = " +
                                                    std::to_string(max_err));

  // xi' / xi^theta in L1 with the claimed theta.
  const double theta = rate.ClaimedTheta();
  double l1 = 0.0;
  for (size_t i = 1; i < grid.size(); i++)
  {
    const double f0 = std::abs(rate.XiPrime(grid[i - 1])) / std::pow(rate.Xi(grid[i - 1]), theta);
    const double f1 = std::abs(rate.XiPrime(grid[i])) / std::pow(rate.Xi(grid[i]), theta);
    l1 += 0.5 * (grid[i] - grid[i - 1]) * (f0 + f1);
  }
  l1 += rate.TailXiPrimeIntegral(horizon, theta);
  rep.theta = theta;
  rep.xi_prime_l1 = l1;
  add("H2.xi_prime_L1", std::isfinite(l1), "theta = " + std::to_string(theta) +
                                               ", ||xi'/xi^theta||_1 = " + std::to_string(l1));

  // r = sup_{t <= t'} ln(xi(t') / xi(t)), grid part plus analytic tail.
  double r = 0.0;
  double min_log = std::log(rate.Xi(grid.front()));
  double sup_xi = 0.0;
  double min_xi = rate.Xi(grid.front());
  for (double t : grid)
  {
    const double lx = std::log(rate.Xi(t));
    min_log = std::min(min_log, lx);
    r = std::max(r, lx - min_log);
    sup_xi = std::max(sup_xi, rate.Xi(t));
    min_xi = std::min(min_xi, rate.Xi(t));
  }
  r = std::max(r, std::log(rate.TailSup(horizon) / min_xi));
  r = std::max(r, std::log(rate.TailRatioBound(horizon)));
  rep.r = r;
  rep.exp_r = std::exp(r);
  rep.xi_sup = std::max(sup_xi, rate.TailSup(horizon));
  const double claimed_r = rate.ClaimedR();
  {
    std::ostringstream os;
    os << "estimated r = " << r << ", claimed r = " << claimed_r;
    add("H2.r_bound", r <= claimed_r + 1e-12, os.str());
  }

  // Consequence xi(t + s) <= e^r xi(t) on every grid pair, via running minimum.
  bool ratio_ok = true;
  double running_min = rate.Xi(grid.front());
  for (double t : grid)
  {
    running_min = std::min(running_min, rate.Xi(t));
    ratio_ok = ratio_ok && rate.Xi(t) <= std::exp(claimed_r) * running_min * (1.0 + 1e-12);
  }
  add("H2.xi_ratio", ratio_ok, "e^r = " + std::to_string(std::exp(claimed_r)));
  return rep;
}

}  // namespace kwave

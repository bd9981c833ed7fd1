// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/decay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kwave/error.hpp"

namespace kwave
{

double SampledEnergy::MaxIncrease() const
{
  double m = 0.0;
  for (size_t j = 1; j < E.size(); j++)
  {
    m = std::max(m, E[j] - E[j - 1]);
  }
  return m;
}

SampledEnergy SampledEnergy::Truncate(double horizon) const
{
  SampledEnergy out;
  const double slack = 1e-9 * std::max(1.0, horizon);
  for (size_t j = 0; j < t.size() && t[j] <= horizon + slack; j++)
  {
    out.t.push_back(t[j]);
    out.E.push_back(E[j]);
    out.phi.push_back(phi[j]);
    out.xi.push_back(xi[j]);
  }
  return out;
}

void ValidateSampledEnergy(const SampledEnergy &se)
{
  const size_t n = se.t.size();
  Require(n >= 2, ErrorCode::Validation, "sampled energy needs at least two samples");
  Require(se.E.size() == n && se.phi.size() == n && se.xi.size() == n, ErrorCode::Validation,
          "sampled energy columns differ in length");
  Require(std::abs(se.phi[0]) <= 1e-12, ErrorCode::Validation, "Phi(0) must be 0");
  for (size_t j = 0; j < n; j++)
  {
    Require(std::isfinite(se.E[j]) && se.E[j] >= 0.0, ErrorCode::Validation,
            "sampled energy must be finite and nonnegative");
    if (j > 0)
    {
      Require(se.t[j] > se.t[j - 1], ErrorCode::Validation, "sample times must increase");
      Require(se.phi[j] > se.phi[j - 1], ErrorCode::Validation,
              "Phi must be strictly increasing");
    }
  }
}

SampledEnergy SampleFromRate(const std::vector<double> &t, const std::vector<double> &E,
                             const RateFunction &rate)
{
  SampledEnergy se;
  se.t = t;
  se.E = E;
  for (double s : t)
  {
    se.phi.push_back(rate.Phi(s));
    se.xi.push_back(rate.Xi(s));
  }
  return se;
}

SampledEnergy SampleFromFunctions(const std::vector<double> &t,
                                  const std::function<double(double)> &E,
                                  const std::function<double(double)> &phi,
                                  const std::function<double(double)> &xi)
{
  SampledEnergy se;
  se.t = t;
  for (double s : t)
  {
    se.E.push_back(E(s));
    se.phi.push_back(phi(s));
    se.xi.push_back(xi(s));
  }
  return se;
}

std::string ToString(Outcome o)
{
  switch (o)
  {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    case Outcome::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

namespace
{

// C[j] = int_{t_j}^{T} f by the trapezoid rule.
std::vector<double> ReverseCumulative(const std::vector<double> &t, const std::vector<double> &f)
{
  std::vector<double> c(t.size(), 0.0);
  for (size_t j = t.size() - 1; j-- > 0;)
  {
    c[j] = c[j + 1] + 0.5 * (t[j + 1] - t[j]) * (f[j] + f[j + 1]);
  }
  return c;
}

// Linear interpolation of column v at time s; returns the index of the left sample.
double Interp(const std::vector<double> &t, const std::vector<double> &v, double s, size_t *left)
{
  auto it = std::upper_bound(t.begin(), t.end(), s);
  size_t j = it == t.begin() ? 0 : static_cast<size_t>(it - t.begin()) - 1;
  j = std::min(j, t.size() - 2);
  if (left)
  {
    *left = j;
  }
  const double w = (s - t[j]) / (t[j + 1] - t[j]);
  return (1.0 - w) * v[j] + w * v[j + 1];
}

// int_S^T f for f sampled at t, with cumulative c from ReverseCumulative.
double TailIntegral(const std::vector<double> &t, const std::vector<double> &f,
                    const std::vector<double> &c, double S)
{
  size_t j = 0;
  const double fs = Interp(t, f, S, &j);
  return c[j + 1] + 0.5 * (t[j + 1] - S) * (fs + f[j + 1]);
}

}  // namespace

MartinezResult MartinezCheck(const SampledEnergy &se, double sigma, double omega,
                             const MartinezOptions &opts)
{
  Require(omega > 0.0, ErrorCode::InvalidArgument, "omega must be positive");
  Require(sigma >= 0.0, ErrorCode::InvalidArgument, "sigma must be nonnegative");
  ValidateSampledEnergy(se);
  const double inc = se.MaxIncrease();
  if (inc > opts.tol_E)
  {
    std::ostringstream os;
    os << "energy is not nonincreasing: increase " << inc << " exceeds tol_E " << opts.tol_E;
    throw Error(ErrorCode::Validation, os.str());
  }

  MartinezResult res;
  const size_t n = se.size();
  const double E0 = se.E[0];
  const double T = se.Horizon();
  const double e0s = std::pow(E0, sigma);

  std::vector<double> integrand(n);
  for (size_t j = 0; j < n; j++)
  {
    integrand[j] = std::pow(se.E[j], 1.0 + sigma) * se.xi[j];
  }
  const std::vector<double> cum = ReverseCumulative(se.t, integrand);

  bool any_fail = false, any_inconclusive = false;
  bool first = true;
  const int m = std::max(opts.s_points, 1);
  for (int i = 0; i < m; i++)
  {
    const double s0 = std::max(se.t[0], opts.s_start);
    const double S = s0 + (T - s0) * static_cast<double>(i) / static_cast<double>(m);
    const double ES = Interp(se.t, se.E, S, nullptr);
    const double bound = e0s * ES / omega;
    const double partial = TailIntegral(se.t, integrand, cum, S);
    const double slack = opts.rel_tol * bound;
    double lhs = partial;
    if (partial > bound + slack)
    {
      any_fail = true;
    }
    else if (opts.tail)
    {
      lhs += *opts.tail;
      any_fail = any_fail || lhs > bound + slack;
    }
    else if (integrand.back() >= opts.tail_rel * bound)
    {
      any_inconclusive = true;
    }
    const double margin = bound > 0.0 ? (bound - lhs) / bound : (lhs > 0.0 ? -1.0 : 0.0);
    if (first || margin < res.hypothesis_margin)
    {
      res.hypothesis_margin = margin;
      res.worst_S = S;
      first = false;
    }
  }
  res.hypothesis = any_fail ? Outcome::Fail
                            : (any_inconclusive ? Outcome::Inconclusive : Outcome::Pass);

  first = true;
  bool concl_fail = false;
  for (size_t j = 0; j < n; j++)
  {
    double env;
    if (sigma == 0.0)
    {
      env = E0 * std::exp(1.0 - omega * se.phi[j]);
    }
    else
    {
      env = E0 * std::pow((1.0 + sigma) / (1.0 + sigma * omega * se.phi[j]), 1.0 / sigma);
    }
    const double margin = E0 > 0.0 ? (env - se.E[j]) / E0 : 0.0;
    if (se.E[j] > env * (1.0 + opts.rel_tol))
    {
      concl_fail = true;
    }
    if (first || margin < res.conclusion_margin)
    {
      res.conclusion_margin = margin;
      res.worst_t = se.t[j];
      first = false;
    }
  }
  res.conclusion = concl_fail ? Outcome::Fail : Outcome::Pass;

  std::ostringstream os;
  os.precision(6);
  os << "hypothesis " << ToString(res.hypothesis) << " (worst margin " << res.hypothesis_margin
     << " at S = " << res.worst_S << "), conclusion " << ToString(res.conclusion)
     << " (worst margin " << res.conclusion_margin << " at t = " << res.worst_t << ")";
  if (res.hypothesis == Outcome::Inconclusive)
  {
    os << "; the integrand at T is not negligible and no closed-form tail was supplied";
  }
  res.detail = os.str();
  return res;
}

OmegaFit FitOmega(const SampledEnergy &se)
{
  ValidateSampledEnergy(se);
  OmegaFit fit;
  const double E0 = se.E[0];
  if (E0 <= 0.0)
  {
    fit.trivial = true;
    return fit;
  }
  bool first = true;
  for (size_t j = 0; j < se.size(); j++)
  {
    if (se.phi[j] <= 0.0 || se.E[j] <= 0.0)
    {
      continue;
    }
    const double w = (1.0 + std::log(E0 / se.E[j])) / se.phi[j];
    if (first || w < fit.omega_max)
    {
      fit.omega_max = w;
      fit.attained_at = se.t[j];
      first = false;
    }
  }
  if (first)
  {
    // Energy vanishes after t = 0: any omega is valid.
    fit.trivial = true;
    return fit;
  }
  fit.holds = true;
  fit.sharp = false;
  for (size_t j = 0; j < se.size(); j++)
  {
    const double env = E0 * std::exp(1.0 - fit.omega_max * se.phi[j]);
    const double env_sharp = E0 * std::exp(1.0 - 1.01 * fit.omega_max * se.phi[j]);
    fit.holds = fit.holds && se.E[j] <= env * (1.0 + 1e-12);
    fit.sharp = fit.sharp || se.E[j] > env_sharp;
  }
  return fit;
}

LinearFit FitLine(const std::vector<double> &x, const std::vector<double> &y)
{
  Require(x.size() == y.size(), ErrorCode::InvalidArgument, "regression inputs differ");
  LinearFit f;
  f.n = static_cast<int>(x.size());
  if (f.n < 2)
  {
    return f;
  }
  double mx = 0.0, my = 0.0;
  for (int i = 0; i < f.n; i++)
  {
    mx += x[i];
    my += y[i];
  }
  mx /= f.n;
  my /= f.n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (int i = 0; i < f.n; i++)
  {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0)
  {
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

namespace
{

LinearFit TailRegression(const SampledEnergy &se, double t_tail,
                         const std::function<double(size_t)> &abscissa)
{
  std::vector<double> x, y;
  for (size_t j = 0; j < se.size(); j++)
  {
    if (se.t[j] >= t_tail && se.E[j] > 0.0)
    {
      x.push_back(abscissa(j));
      y.push_back(std::log(se.E[j]));
    }
  }
  return FitLine(x, y);
}

}  // namespace

LinearFit TailRegressionPhi(const SampledEnergy &se, double t_tail)
{
  return TailRegression(se, t_tail, [&](size_t j) { return se.phi[j]; });
}

LinearFit TailRegressionLogTime(const SampledEnergy &se, double t_tail)
{
  return TailRegression(se, t_tail, [&](size_t j) { return std::log1p(se.t[j]); });
}

RhoProfile WeightedIntegralCheck(const SampledEnergy &se, const std::vector<double> &S_grid)
{
  ValidateSampledEnergy(se);
  RhoProfile prof;
  const size_t n = se.size();
  std::vector<double> f(n);
  for (size_t j = 0; j < n; j++)
  {
    f[j] = se.xi[j] * se.E[j];
  }
  const std::vector<double> cum = ReverseCumulative(se.t, f);
  for (double S : S_grid)
  {
    Require(S >= se.t.front() && S < se.Horizon(), ErrorCode::InvalidArgument,
            "S-grid must lie within [t0, T)");
    const double integral = TailIntegral(se.t, f, cum, S);
    const double ES = Interp(se.t, se.E, S, nullptr);
    double rho = 0.0;
    if (ES > 0.0)
    {
      rho = integral / ES;
    }
    else if (integral > 0.0)
    {
      prof.violation = true;
      rho = std::numeric_limits<double>::infinity();
    }
    prof.finite = prof.finite && std::isfinite(rho);
    prof.S.push_back(S);
    prof.rho.push_back(rho);
    prof.max_rho = std::max(prof.max_rho, rho);
  }
  return prof;
}

std::vector<double> MakeSGrid(double t0, double horizon, int count, double fraction)
{
  Require(count >= 1, ErrorCode::InvalidArgument, "S-grid needs at least one point");
  Require(fraction > 0.0 && fraction < 1.0, ErrorCode::InvalidArgument,
          "S-grid fraction must lie in (0, 1)");
  Require(t0 >= 0.0 && t0 < horizon, ErrorCode::InvalidArgument,
          "weighted-integral start must lie in [0, T)");
  std::vector<double> s;
  const double stop = t0 + fraction * (horizon - t0);
  for (int i = 0; i < count; i++)
  {
    s.push_back(count == 1 ? t0 : t0 + (stop - t0) * i / (count - 1.0));
  }
  return s;
}

double RelativeChange(double reference, double value)
{
  if (reference == value)
  {
    return 0.0;
  }
  return std::abs(value - reference) / std::abs(reference);
}

DecayReport AnalyzeDecay(const SampledEnergy &se, const RelaxationKernel &kernel,
                         const DecayOptions &opts)
{
  ValidateSampledEnergy(se);
  DecayReport rep;
  rep.horizon = se.Horizon();
  rep.E0 = se.E[0];
  rep.max_increase = se.MaxIncrease();
  rep.monotone = rep.max_increase <= opts.tol_E;
  rep.omega = FitOmega(se);
  rep.t_tail = opts.t_tail > 0.0 ? opts.t_tail : 0.5 * rep.horizon;
  rep.tail_phi = TailRegressionPhi(se, rep.t_tail);
  rep.tail_log_time = TailRegressionLogTime(se, rep.t_tail);

  if (opts.t0 >= 0.0)
  {
    rep.t0 = opts.t0;
  }
  else
  {
    rep.t0 = kernel.IsZero() ? 0.0 : TimeForMassFraction(kernel, 0.5);
  }
  const double half = 0.5 * rep.horizon;
  Require(rep.t0 < half, ErrorCode::Validation,
          "weighted-integral start t0 must lie before half the horizon");
  rep.rho = WeightedIntegralCheck(
      se, MakeSGrid(rep.t0, rep.horizon, opts.s_count, opts.s_fraction));

  const SampledEnergy half_se = se.Truncate(half);
  if (half_se.size() >= 2)
  {
    rep.omega_half = FitOmega(half_se).omega_max;
    rep.max_rho_half =
        WeightedIntegralCheck(half_se, MakeSGrid(rep.t0, half_se.Horizon(), opts.s_count,
                                                 opts.s_fraction))
            .max_rho;
    rep.omega_change = RelativeChange(rep.omega_half, rep.omega.omega_max);
    rep.rho_change = RelativeChange(rep.max_rho_half, rep.rho.max_rho);
  }

  if (rep.rho.max_rho > 0.0 && rep.rho.finite && rep.monotone)
  {
    MartinezOptions mo;
    mo.tol_E = opts.tol_E;
    mo.s_start = rep.t0;
    rep.martinez = MartinezCheck(se, 0.0, 1.0 / rep.rho.max_rho, mo);
  }
  else
  {
    rep.martinez.detail = rep.E0 == 0.0 ? "zero energy: trivially satisfied"
                                        : "not evaluated: weighted integral unavailable";
    rep.martinez.hypothesis = rep.E0 == 0.0 ? Outcome::Pass : Outcome::Inconclusive;
    rep.martinez.conclusion = rep.E0 == 0.0 ? Outcome::Pass : Outcome::Inconclusive;
  }
  return rep;
}

}  // namespace kwave

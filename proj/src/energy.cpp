// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/energy.hpp"

#include <cmath>

#include "kwave/error.hpp"

namespace kwave
{

double KirchhoffCoefficient(const PhysicalParams &params, double grad_norm_sq)
{
  return params.a + params.b * std::pow(grad_norm_sq, params.kappa);
}

BoundaryField BoundaryVelocity(const DiscreteOperators &ops, const PhysicalParams &params,
                               const SimState &state)
{
  return -(ops.Trace(state.v) + params.q * state.y) / params.p;
}

namespace
{

struct Parts
{
  double grad_sq;
  double diamond;
  double boundary_q;  // int q y^2
};

Parts Common(const SimState &state, const HistoryBuffer &history, const PhysicalParams &params,
             const DiscreteOperators &ops, const Field &ku)
{
  Parts p{};
  p.grad_sq = state.u.dot(ku);
  p.diamond = history.Empty() ? 0.0 : history.GDiamond(state.u, ku);
  p.boundary_q = BoundaryQuadratic(ops, state.y, params.q);
  return p;
}

void CheckHistory(const SimState &state, const HistoryBuffer &history)
{
  if (!history.Empty())
  {
    Require(std::abs(history.LastTime() - state.t) <= 1e-9 * std::max(1.0, state.t),
            ErrorCode::InvalidArgument, "history is not current at the state time");
  }
}

}  // namespace

EnergyReport ComputeEnergy(const SimState &state, const HistoryBuffer &history,
                           const RelaxationKernel &kernel, const PhysicalParams &params,
                           const DiscreteOperators &ops)
{
  CheckHistory(state, history);
  const Field ku = ops.ApplyStiffness(state.u);
  const Parts p = Common(state, history, params, ops, ku);
  EnergyReport r;
  r.t = state.t;
  r.kinetic = 0.5 * L2NormSq(ops, state.v);
  r.elastic = 0.5 * (params.a - kernel.Integral(state.t)) * p.grad_sq;
  r.kirchhoff = params.b / (2.0 * (params.kappa + 1.0)) * std::pow(p.grad_sq, params.kappa + 1.0);
  r.boundary = 0.5 * p.boundary_q;
  r.memory = 0.5 * p.diamond;
  r.source = params.source ? -LkNormPow(ops, state.u, params.k_exp) / params.k_exp : 0.0;
  r.E = r.ComponentSum();

  const double gamma_sq = kernel.L() * p.grad_sq +
                          params.b / (params.kappa + 1.0) *
                              std::pow(p.grad_sq, params.kappa + 1.0) +
                          p.boundary_q + p.diamond;
  r.gamma_fn = std::sqrt(std::max(gamma_sq, 0.0));

  const double gprime_diamond = history.Empty() ? 0.0 : history.GPrimeDiamond(state.u, ku);
  double damping = 0.0;
  if (ops.NumGamma1() > 0 && params.p > 0.0)
  {
    const BoundaryField yt = BoundaryVelocity(ops, params, state);
    damping = BoundaryQuadratic(ops, yt, params.p);
  }
  r.rate_rhs = -0.5 * kernel.G(state.t) * p.grad_sq + 0.5 * gprime_diamond - damping;
  r.u_l2 = std::sqrt(std::max(L2NormSq(ops, state.u), 0.0));
  r.grad_u_l2 = std::sqrt(std::max(p.grad_sq, 0.0));
  return r;
}

double ComputeGammaFn(const SimState &state, const HistoryBuffer &history,
                      const RelaxationKernel &kernel, const PhysicalParams &params,
                      const DiscreteOperators &ops)
{
  CheckHistory(state, history);
  const Field ku = ops.ApplyStiffness(state.u);
  const Parts p = Common(state, history, params, ops, ku);
  const double gamma_sq = kernel.L() * p.grad_sq +
                          params.b / (params.kappa + 1.0) *
                              std::pow(p.grad_sq, params.kappa + 1.0) +
                          p.boundary_q + p.diamond;
  return std::sqrt(std::max(gamma_sq, 0.0));
}

std::vector<double> RateIdentityResidual(const std::vector<double> &times,
                                         const std::vector<double> &energy,
                                         const std::vector<double> &rate_rhs)
{
  const size_t n = times.size();
  Require(n >= 3, ErrorCode::InvalidArgument, "rate identity needs at least 3 records");
  Require(energy.size() == n && rate_rhs.size() == n, ErrorCode::InvalidArgument,
          "rate identity inputs differ in length");
  const double dt = (times.back() - times.front()) / static_cast<double>(n - 1);
  Require(dt > 0.0, ErrorCode::InvalidArgument, "rate identity needs increasing times");
  for (size_t j = 1; j < n; j++)
  {
    Require(std::abs((times[j] - times[j - 1]) - dt) <= 1e-6 * dt, ErrorCode::InvalidArgument,
            "rate identity needs uniformly spaced records");
  }
  std::vector<double> res(n);
  for (size_t j = 0; j < n; j++)
  {
    double dE;
    if (j == 0)
    {
      dE = (-3.0 * energy[0] + 4.0 * energy[1] - energy[2]) / (2.0 * dt);
    }
    else if (j == n - 1)
    {
      dE = (3.0 * energy[n - 1] - 4.0 * energy[n - 2] + energy[n - 3]) / (2.0 * dt);
    }
    else
    {
      dE = (energy[j + 1] - energy[j - 1]) / (2.0 * dt);
    }
    res[j] = std::abs(dE - rate_rhs[j]);
  }
  return res;
}

void FillRateResiduals(std::vector<EnergyReport> &reports)
{
  if (reports.size() < 3)
  {
    return;
  }
  std::vector<double> t, e, r;
  for (const auto &rep : reports)
  {
    t.push_back(rep.t);
    e.push_back(rep.E);
    r.push_back(rep.rate_rhs);
  }
  const auto res = RateIdentityResidual(t, e, r);
  for (size_t j = 0; j < reports.size(); j++)
  {
    reports[j].rate_residual = res[j];
  }
}

}  // namespace kwave

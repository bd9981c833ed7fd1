// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_ENERGY_HPP
#define KWAVE_ENERGY_HPP

#include <limits>
#include <vector>

#include "kwave/assembly.hpp"
#include "kwave/history.hpp"
#include "kwave/kernels.hpp"

namespace kwave
{

// Nodal state of the coupled system at time t.
struct SimState
{
  double t = 0.0;
  Field u;
  Field v;          // u_t
  BoundaryField y;  // acoustic boundary displacement
  double m_kir = 0.0;  // a + b ||grad u||^{2 kappa}
};

double KirchhoffCoefficient(const PhysicalParams &params, double grad_norm_sq);

// y_t from u_t + p y_t + q y = h on Gamma1.
BoundaryField BoundaryVelocity(const DiscreteOperators &ops, const PhysicalParams &params,
                               const SimState &state);

struct EnergyReport
{
  double t = 0.0;
  double E = 0.0;
  double kinetic = 0.0;    // 1/2 ||u_t||^2
  double elastic = 0.0;    // 1/2 (a - int_0^t g) ||grad u||^2
  double kirchhoff = 0.0;  // b / (2 (kappa + 1)) ||grad u||^{2 (kappa + 1)}
  double boundary = 0.0;   // 1/2 int_Gamma1 q y^2
  double memory = 0.0;     // 1/2 (g diamond grad u)
  double source = 0.0;     // -1/k ||u||_k^k
  double gamma_fn = 0.0;
  double rate_rhs = 0.0;   // -1/2 g ||grad u||^2 + 1/2 (g' diamond grad u) - int p y_t^2
  double rate_residual = std::numeric_limits<double>::quiet_NaN();
  double u_l2 = 0.0;
  double grad_u_l2 = 0.0;

  double ComponentSum() const
  {
    return kinetic + elastic + kirchhoff + boundary + memory + source;
  }
};

// Energy and well functional of the state. history must end at state.t (or be empty at t = 0).
EnergyReport ComputeEnergy(const SimState &state, const HistoryBuffer &history,
                           const RelaxationKernel &kernel, const PhysicalParams &params,
                           const DiscreteOperators &ops);

double ComputeGammaFn(const SimState &state, const HistoryBuffer &history,
                      const RelaxationKernel &kernel, const PhysicalParams &params,
                      const DiscreteOperators &ops);

// Central-difference dE/dt (second-order one-sided at the ends) minus the dissipation rate,
// in absolute value. Requires at least three uniformly spaced records.
std::vector<double> RateIdentityResidual(const std::vector<double> &times,
                                         const std::vector<double> &energy,
                                         const std::vector<double> &rate_rhs);

// Fills EnergyReport::rate_residual in place.
void FillRateResiduals(std::vector<EnergyReport> &reports);

}  // namespace kwave

#endif  // KWAVE_ENERGY_HPP

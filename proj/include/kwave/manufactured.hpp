// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_MANUFACTURED_HPP
#define KWAVE_MANUFACTURED_HPP

#include <functional>
#include <string>
#include <vector>

#include "kwave/stepper.hpp"

namespace kwave
{

using SpaceTimeFn = std::function<double(const Point &, double)>;

// Closed-form solution pair (u, y) with the derivatives the forcing needs.
struct ExactSolution
{
  SpaceTimeFn u, u_t, u_tt, laplacian;
  SpaceTimeFn normal_derivative;            // du/dnu on Gamma1
  std::function<double(double)> grad_norm_sq;  // ||grad u(t)||_2^2
  SpaceTimeFn y, y_t;                       // on Gamma1
};

struct ManufacturedCase
{
  Forcing forcing;
  Field u0, u1;
  BoundaryField y0;
  // max |flux residual| and |boundary residual| over the sampled horizon: how far the
  // acoustic pair is from compatibility without boundary forcing.
  double max_flux_residual = 0.0;
  double max_boundary_residual = 0.0;
};

// Derives f_Omega = u_tt - M(t) Lap u + int_0^t g(t-s) Lap u(s) ds - |u|^{k-2} u and the
// two boundary residuals. Memory integrals use adaptive quadrature of the exact integrand.
// Throws Error(Validation) when u does not vanish on Gamma0.
ManufacturedCase BuildManufacturedCase(const ExactSolution &exact, const DiscreteOperators &ops,
                                       const PhysicalParams &params,
                                       const RelaxationKernel &kernel, double horizon = 1.0);

// u = X(s) cos t on an interval, s the distance from the Dirichlet end, with
// X(s) = amplitude * s / L ("linear") or amplitude * sin(pi s / (2L)) ("sine").
// y solves p y' + q y = -u_t on Gamma1 with y(0) = 0.
ExactSolution SeparableSolution1D(const std::string &profile, const DomainSpec &domain,
                                  const PhysicalParams &params, double amplitude = 1.0);

struct ConvergenceLevel
{
  int resolution = 0;
  double dt = 0.0;
  double l2_error = 0.0;
  double ratio = 0.0;  // previous error / this error; 0 on the first level
};

struct ConvergenceStudy
{
  std::vector<ConvergenceLevel> levels;
  double min_ratio = 0.0;
};

// Halves h and dt per level and measures the L2 error at t_end against the interpolant.
ConvergenceStudy RunConvergenceStudy(const std::string &profile, DomainSpec domain,
                                     const PhysicalParams &params,
                                     const RelaxationKernel &kernel, double dt0, double t_end,
                                     int levels);

}  // namespace kwave

#endif  // KWAVE_MANUFACTURED_HPP

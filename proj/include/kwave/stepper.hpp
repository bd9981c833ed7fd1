// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_STEPPER_HPP
#define KWAVE_STEPPER_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kwave/energy.hpp"
#include "kwave/error.hpp"

namespace kwave
{

// Space-time source terms used by manufactured-solution runs. Any member may be empty.
struct Forcing
{
  // Right side of the interior equation.
  std::function<double(const Point &, double)> body;
  // Extra flux: (a + b ||grad u||^{2 kappa}) du/dnu - int g du/dnu = y_t + flux.
  std::function<double(const Point &, double)> flux;
  // Right side of u_t + p y_t + q y = boundary.
  std::function<double(const Point &, double)> boundary;
};

struct StepperConfig
{
  double dt = 1e-3;
  double t_end = 1.0;
  int record_every = 1;
  // Stability bound dt <= c_cfl * h / sqrt(m_kir); 0 selects 1 / sqrt(dimension).
  double c_cfl = 0.0;
  StorageConfig storage;
  ConvolutionPath path = ConvolutionPath::Auto;
  std::optional<Forcing> forcing;
};

struct Record
{
  SimState state;
  EnergyReport energy;
};

struct Trajectory
{
  double dt = 0.0;
  int record_every = 1;
  std::vector<Record> records;
  double initial_flux_residual = 0.0;

  std::vector<double> Times() const;
  std::vector<double> Energies() const;
  std::vector<EnergyReport> Reports() const;
};

// Thrown by Run when a step fails; carries the trajectory recorded so far.
class SimulationAbort : public Error
{
public:
  SimulationAbort(ErrorCode code, const std::string &what, double time, Trajectory partial)
      : Error(code, what), time_(time), partial_(std::move(partial))
  {
  }
  double time() const { return time_; }
  const Trajectory &partial() const { return partial_; }

private:
  double time_;
  Trajectory partial_;
};

//
// Explicit central-difference integrator on the lumped-mass weak form. Positions advance
// by velocity Verlet; on the acoustic boundary the velocity and y are advanced together by
// the trapezoidal rule, which is a per-node 2x2 linear solve.
//
class Simulation
{
public:
  Simulation(const DiscreteOperators &ops, const RelaxationKernel &kernel,
             const PhysicalParams &params, const StepperConfig &cfg, const Field &u0,
             const Field &u1, const BoundaryField &y0);

  // Advance one step. Throws Error(Cfl) or Error(Blowup).
  void Step();

  const SimState &state() const { return state_; }
  const HistoryBuffer &history() const { return history_; }
  const Field &acceleration() const { return accel_; }
  long steps() const { return steps_; }
  double CflLimit() const;
  EnergyReport Energy() const;
  // max over Gamma1 nodes of |(m_kir K u - conv)_i / w_i - y_t| at t = 0.
  double InitialFluxResidual() const { return initial_flux_residual_; }

private:
  // Interior force without the acoustic coupling, at the current state.
  Field InteriorForce(const Field &ku) const;
  double Eval(const std::function<double(const Point &, double)> &f, int node, double t) const;
  void CheckCfl() const;

  const DiscreteOperators &ops_;
  RelaxationKernel kernel_;
  PhysicalParams params_;
  StepperConfig cfg_;
  HistoryBuffer history_;
  SimState state_;
  Field accel_;
  BoundaryField yt_;
  long steps_ = 0;
  double c_cfl_ = 1.0;
  double initial_flux_residual_ = 0.0;
};

// Run to cfg.t_end, recording every cfg.record_every steps. Throws SimulationAbort.
Trajectory Run(const DiscreteOperators &ops, const RelaxationKernel &kernel,
               const PhysicalParams &params, const StepperConfig &cfg, const Field &u0,
               const Field &u1, const BoundaryField &y0);

}  // namespace kwave

#endif  // KWAVE_STEPPER_HPP

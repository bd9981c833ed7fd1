// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/stepper.hpp"

#include <cmath>
#include <sstream>

namespace kwave
{

std::vector<double> Trajectory::Times() const
{
  std::vector<double> out;
  for (const auto &r : records)
  {
    out.push_back(r.state.t);
  }
  return out;
}

std::vector<double> Trajectory::Energies() const
{
  std::vector<double> out;
  for (const auto &r : records)
  {
    out.push_back(r.energy.E);
  }
  return out;
}

std::vector<EnergyReport> Trajectory::Reports() const
{
  std::vector<EnergyReport> out;
  for (const auto &r : records)
  {
    out.push_back(r.energy);
  }
  return out;
}

Simulation::Simulation(const DiscreteOperators &ops, const RelaxationKernel &kernel,
                       const PhysicalParams &params, const StepperConfig &cfg, const Field &u0,
                       const Field &u1, const BoundaryField &y0)
    : ops_(ops), kernel_(kernel), params_(params), cfg_(cfg),
      history_(kernel, ops.NumNodes(), cfg.storage, cfg.path)
{
  const int n = ops.NumNodes();
  Require(u0.size() == n && u1.size() == n, ErrorCode::InvalidArgument,
          "initial fields do not match the mesh");
  Require(y0.size() == ops.NumGamma1(), ErrorCode::InvalidArgument,
          "initial boundary field does not match Gamma1");
  Require(cfg.dt > 0.0, ErrorCode::Validation, "stepping.dt must be positive");
  Require(cfg.t_end >= 0.0, ErrorCode::Validation, "stepping.t_end must be nonnegative");
  Require(cfg.record_every >= 1, ErrorCode::Validation,
          "stepping.record_every must be at least 1");
  Require(ops.NumGamma1() == 0 || params.p > 0.0, ErrorCode::Hypothesis,
          "(H1) violated: p must be positive on Gamma1");
  Require(ops.NumGamma1() == 0 || params.q > 0.0, ErrorCode::Hypothesis,
          "(H1) violated: q must be positive on Gamma1");
  c_cfl_ = cfg.c_cfl > 0.0 ? cfg.c_cfl : 1.0 / std::sqrt(static_cast<double>(ops.mesh.dimension));
  Require(c_cfl_ <= 1.0, ErrorCode::Validation, "stepping.c_cfl must not exceed 1");

  state_.t = 0.0;
  state_.u = u0;
  state_.v = u1;
  ops.Pin(state_.u);
  ops.Pin(state_.v);
  state_.y = y0;

  const Field ku = ops.ApplyStiffness(state_.u);
  history_.Push(0.0, state_.u, ku);
  state_.m_kir = KirchhoffCoefficient(params_, state_.u.dot(ku));
  CheckCfl();

  const Field force = InteriorForce(ku);
  yt_.resize(ops.NumGamma1());
  accel_ = Field::Zero(n);
  for (int n_free : ops.mesh.free_nodes)
  {
    accel_[n_free] = force[n_free] / ops.lumped_mass[n_free];
  }
  const Forcing *fc = cfg_.forcing ? &*cfg_.forcing : nullptr;
  double residual = 0.0;
  const Field conv = history_.ConvolutionForce(0.0);
  for (int i = 0; i < ops.NumGamma1(); i++)
  {
    const int node = ops.mesh.gamma1_nodes[i];
    const double w = ops.mesh.gamma1_weights[i];
    const double h2 = fc ? Eval(fc->boundary, node, 0.0) : 0.0;
    const double h1 = fc ? Eval(fc->flux, node, 0.0) : 0.0;
    yt_[i] = (h2 - state_.v[node] - params_.q * state_.y[i]) / params_.p;
    accel_[node] += w * (yt_[i] + h1) / ops.lumped_mass[node];
    const double flux = (state_.m_kir * ku[node] - conv[node]) / w;
    residual = std::max(residual, std::abs(flux - yt_[i] - h1));
  }
  initial_flux_residual_ = residual;
}

double Simulation::Eval(const std::function<double(const Point &, double)> &f, int node,
                        double t) const
{
  return f ? f(ops_.mesh.nodes[node], t) : 0.0;
}

double Simulation::CflLimit() const
{
  return c_cfl_ * ops_.mesh.h / std::sqrt(state_.m_kir);
}

void Simulation::CheckCfl() const
{
  if (cfg_.dt > CflLimit())
  {
    std::ostringstream os;
    os << "CFL violation at t = " << state_.t << ": dt = " << cfg_.dt << " exceeds "
       << CflLimit() << " (h = " << ops_.mesh.h << ", Kirchhoff coefficient " << state_.m_kir
       << ")";
    throw Error(ErrorCode::Cfl, os.str());
  }
}

Field Simulation::InteriorForce(const Field &ku) const
{
  Field f = -state_.m_kir * ku + history_.ConvolutionForce(state_.t);
  if (params_.source)
  {
    f += SourceVector(ops_, state_.u, params_.k_exp);
  }
  if (cfg_.forcing && cfg_.forcing->body)
  {
    // Lumped load, consistent with the lumped mass.
    for (int n : ops_.mesh.free_nodes)
    {
      f[n] += ops_.lumped_mass[n] * cfg_.forcing->body(ops_.mesh.nodes[n], state_.t);
    }
  }
  ops_.Pin(f);
  return f;
}

void Simulation::Step()
{
  const double dt = cfg_.dt;
  const Field v_half = state_.v + 0.5 * dt * accel_;
  state_.u += dt * v_half;
  ops_.Pin(state_.u);
  const double t_new = cfg_.dt * static_cast<double>(steps_ + 1);
  state_.t = t_new;

  const Field ku = ops_.ApplyStiffness(state_.u);
  history_.Push(t_new, state_.u, ku);
  state_.m_kir = KirchhoffCoefficient(params_, state_.u.dot(ku));

  const Field force = InteriorForce(ku);
  for (int n : ops_.mesh.free_nodes)
  {
    const double a = force[n] / ops_.lumped_mass[n];
    state_.v[n] = v_half[n] + 0.5 * dt * a;
    accel_[n] = a;
  }

  // Acoustic boundary: unknowns V = v, Z = y_t, Y = y at the new time level with
  //   m V = m v_half + dt/2 (R + w (Z + h1)),  p Z = h2 - V - q Y,  Y = y + dt/2 (Z_old + Z).
  const Forcing *fc = cfg_.forcing ? &*cfg_.forcing : nullptr;
  const double p = params_.p, q = params_.q;
  for (int i = 0; i < ops_.NumGamma1(); i++)
  {
    const int node = ops_.mesh.gamma1_nodes[i];
    const double w = ops_.mesh.gamma1_weights[i];
    const double m = ops_.lumped_mass[node];
    const double h1 = fc ? Eval(fc->flux, node, t_new) : 0.0;
    const double h2 = fc ? Eval(fc->boundary, node, t_new) : 0.0;
    const double y0 = state_.y[i] + 0.5 * dt * yt_[i];
    const double big_p = p + 0.5 * dt * q;
    const double c = 0.5 * dt * w / big_p;
    const double b0 = m * v_half[node] + 0.5 * dt * (force[node] + w * h1);
    const double v_new = (b0 + c * (h2 - q * y0)) / (m + c);
    const double z = (h2 - v_new - q * y0) / big_p;
    state_.v[node] = v_new;
    state_.y[i] = y0 + 0.5 * dt * z;
    yt_[i] = z;
    accel_[node] = (force[node] + w * (z + h1)) / m;
  }
  steps_++;

  if (!state_.u.allFinite() || !state_.v.allFinite() || !state_.y.allFinite() ||
      !std::isfinite(state_.m_kir))
  {
    std::ostringstream os;
    os << "blow-up or instability: non-finite state at t = " << t_new;
    throw Error(ErrorCode::Blowup, os.str());
  }
  CheckCfl();
}

EnergyReport Simulation::Energy() const
{
  return ComputeEnergy(state_, history_, kernel_, params_, ops_);
}

Trajectory Run(const DiscreteOperators &ops, const RelaxationKernel &kernel,
               const PhysicalParams &params, const StepperConfig &cfg, const Field &u0,
               const Field &u1, const BoundaryField &y0)
{
  Trajectory traj;
  traj.dt = cfg.dt;
  traj.record_every = cfg.record_every;
  Simulation sim(ops, kernel, params, cfg, u0, u1, y0);
  traj.initial_flux_residual = sim.InitialFluxResidual();
  traj.records.push_back({sim.state(), sim.Energy()});
  const long total = std::lround(cfg.t_end / cfg.dt);
  try
  {
    for (long s = 1; s <= total; s++)
    {
      sim.Step();
      if (s % cfg.record_every == 0)
      {
        traj.records.push_back({sim.state(), sim.Energy()});
      }
    }
  }
  catch (const Error &e)
  {
    auto reports = traj.Reports();
    FillRateResiduals(reports);
    for (size_t j = 0; j < reports.size(); j++)
    {
      traj.records[j].energy = reports[j];
    }
    throw SimulationAbort(e.code(), e.what(), sim.state().t, std::move(traj));
  }
  auto reports = traj.Reports();
  FillRateResiduals(reports);
  for (size_t j = 0; j < reports.size(); j++)
  {
    traj.records[j].energy = reports[j];
  }
  return traj;
}

}  // namespace kwave

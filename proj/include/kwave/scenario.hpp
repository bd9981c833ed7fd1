// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_SCENARIO_HPP
#define KWAVE_SCENARIO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "kwave/config.hpp"
#include "kwave/decay.hpp"
#include "kwave/manufactured.hpp"
#include "kwave/stableset.hpp"

namespace kwave
{

struct InitialData
{
  Field u0, u1;
  BoundaryField y0;
};

InitialData MakeInitialData(const RunConfig &cfg, const DiscreteOperators &ops);

OptimizerOptions MakeOptimizerOptions(const RunConfig &cfg);

// tol_E = analysis.tol_energy * (dt^2 + h^2) * E(0).
double EnergyTolerance(const RunConfig &cfg, double h, double E0);
// analysis.tol_identity * (D^2 + h^2) * E(0), D = dt * record_every.
double IdentityTolerance(const RunConfig &cfg, double h, double E0);

// Writes the trajectory as CSV: t, E, the six energy parts, gamma_fn, u_l2, grad_u_l2,
// y_0 .. y_{m-1}, E_rate_residual. Reals carry 15 significant digits.
void WriteTrajectoryCsv(std::ostream &os, const Trajectory &traj);

struct CsvEnergy
{
  std::vector<double> t;
  std::vector<double> E;
};

// Reads the t and E columns of a trajectory CSV.
CsvEnergy ReadTrajectoryCsv(const std::string &path);

// Each returns a JSON document.
std::string WellConstantsJson(const WellConstants &wc);
std::string HypothesisJson(const HypothesisReport &rep);
std::string StableSetJson(const StableSetReport &rep, const InvarianceVerdict *inv);
std::string DecayJson(const DecayReport &rep);
std::string ConvergenceJson(const ConvergenceStudy &study, const std::string &profile);

// Simulates the scenario and writes every artifact below outdir (created if missing).
// Returns a JSON summary with the verdict of each enabled check. An aborted run keeps its
// partial outputs, writes an ABORTED marker and rethrows the SimulationAbort.
std::string RunScenario(const RunConfig &cfg, const std::string &outdir);

std::string ComputeConstantsJson(const RunConfig &cfg);
std::string CheckKernelJson(const RunConfig &cfg);
// Decay analysis of a trajectory CSV produced with this config (the config supplies Phi).
std::string DecayReportFromCsv(const RunConfig &cfg, const std::string &csv_path);
std::string RunMmsJson(const RunConfig &cfg);

// One scenario per displacement amplitude, in outdir/amp_<i>, on a worker pool.
std::string RunSweep(const RunConfig &cfg, const std::vector<double> &amplitudes,
                     const std::string &outdir);

}  // namespace kwave

#endif  // KWAVE_SCENARIO_HPP

// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_DECAY_HPP
#define KWAVE_DECAY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kwave/kernels.hpp"

namespace kwave
{

// Energy samples on a uniform grid with phi(t) = int_0^t xi and xi = phi'.
struct SampledEnergy
{
  std::vector<double> t;
  std::vector<double> E;
  std::vector<double> phi;
  std::vector<double> xi;

  size_t size() const { return t.size(); }
  double Horizon() const { return t.empty() ? 0.0 : t.back(); }
  // Largest increase E[j+1] - E[j] (0 for a nonincreasing sequence).
  double MaxIncrease() const;
  // Samples with t <= horizon.
  SampledEnergy Truncate(double horizon) const;
};

// Throws Error(Validation) on size mismatch, negative E, phi(0) != 0 or phi not increasing.
void ValidateSampledEnergy(const SampledEnergy &se);

SampledEnergy SampleFromRate(const std::vector<double> &t, const std::vector<double> &E,
                             const RateFunction &rate);
SampledEnergy SampleFromFunctions(const std::vector<double> &t,
                                  const std::function<double(double)> &E,
                                  const std::function<double(double)> &phi,
                                  const std::function<double(double)> &xi);

enum class Outcome
{
  Pass,
  Fail,
  Inconclusive,
};

std::string ToString(Outcome o);

struct MartinezOptions
{
  double tol_E = 0.0;      // allowed increase between consecutive samples
  double rel_tol = 1e-5;   // relative slack on both inequalities
  // int_T^inf E^{1+sigma} phi' dt when known in closed form.
  std::optional<double> tail;
  double tail_rel = 1e-6;  // integrand at T below this times the bound counts as no tail
  int s_points = 50;       // S-grid size over [s_start, T)
  double s_start = 0.0;
};

struct MartinezResult
{
  Outcome hypothesis = Outcome::Inconclusive;
  Outcome conclusion = Outcome::Inconclusive;
  // min over the S-grid of (bound - integral) / bound, and the S attaining it.
  double hypothesis_margin = 0.0;
  double worst_S = 0.0;
  // min over samples of (envelope - E) / E(0).
  double conclusion_margin = 0.0;
  double worst_t = 0.0;
  std::string detail;
};

// Checks int_S^inf E^{1+sigma} phi' <= E^sigma(0) E(S) / omega on an S-grid and the
// corresponding envelope: E <= E(0) e^{1 - omega phi} for sigma = 0 and
// E <= E(0) ((1 + sigma) / (1 + sigma omega phi))^{1/sigma} for sigma > 0.
// Throws Error(InvalidArgument) for omega <= 0 or sigma < 0 and Error(Validation) when E
// increases by more than tol_E.
MartinezResult MartinezCheck(const SampledEnergy &se, double sigma, double omega,
                             const MartinezOptions &opts = {});

struct OmegaFit
{
  double omega_max = 0.0;
  bool trivial = false;        // E(0) = 0: every omega works
  bool holds = true;           // envelope holds at omega_max at every sample
  bool sharp = true;           // envelope fails somewhere at 1.01 omega_max
  double attained_at = 0.0;    // sample time of the minimizer
};

// omega_max = min over samples with phi > 0 of (1 + ln(E(0) / E)) / phi.
OmegaFit FitOmega(const SampledEnergy &se);

struct LinearFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
};

LinearFit FitLine(const std::vector<double> &x, const std::vector<double> &y);

// Least squares of ln E against phi (or ln(1 + t)) over samples with t >= t_tail and E > 0.
LinearFit TailRegressionPhi(const SampledEnergy &se, double t_tail);
LinearFit TailRegressionLogTime(const SampledEnergy &se, double t_tail);

struct RhoProfile
{
  std::vector<double> S;
  std::vector<double> rho;
  double max_rho = 0.0;
  bool finite = true;
  bool violation = false;  // E(S) = 0 with a nonzero remaining integral
};

// rho(S) = int_S^T xi E dt / E(S) by the trapezoid rule on the samples.
RhoProfile WeightedIntegralCheck(const SampledEnergy &se, const std::vector<double> &S_grid);

// count points uniformly on [t0, t0 + fraction (T - t0)].
std::vector<double> MakeSGrid(double t0, double horizon, int count, double fraction = 0.5);

double RelativeChange(double reference, double value);

struct DecayOptions
{
  double t_tail = 0.0;          // start of the regression window; 0 means half the horizon
  double t0 = -1.0;             // weighted-integral start; < 0 means the half-mass time
  int s_count = 20;
  double s_fraction = 0.5;
  double tol_E = 0.0;
};

struct DecayReport
{
  double horizon = 0.0;
  double E0 = 0.0;
  OmegaFit omega;
  LinearFit tail_phi;
  LinearFit tail_log_time;
  double t_tail = 0.0;
  double t0 = 0.0;
  RhoProfile rho;
  double max_increase = 0.0;
  bool monotone = true;  // max_increase <= tol_E
  // Horizon diagnostics: the same quantities on [0, T/2] and their relative change at T.
  double omega_half = 0.0;
  double max_rho_half = 0.0;
  double omega_change = 0.0;
  double rho_change = 0.0;
  // Martinez hypothesis with sigma = 0, phi = Phi and omega = 1 / max rho.
  MartinezResult martinez;
};

DecayReport AnalyzeDecay(const SampledEnergy &se, const RelaxationKernel &kernel,
                         const DecayOptions &opts = {});

}  // namespace kwave

#endif  // KWAVE_DECAY_HPP

// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_STABLESET_HPP
#define KWAVE_STABLESET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "kwave/assembly.hpp"
#include "kwave/kernels.hpp"
#include "kwave/stepper.hpp"

namespace kwave
{

// F(x) = x^2 / 2 - B^k x^k / k.
double PotentialF(double x, double B, double k_exp);

struct WellPair
{
  double lambda1 = 0.0;  // critical point of F
  double d1 = 0.0;       // F(lambda1)
};

WellPair WellConstantsFromB(double B, double k_exp);

struct OptimizerOptions
{
  int starts = 8;
  std::uint64_t seed = 20240917;
  int max_iterations = 5000;
  double rel_tol = 1e-10;  // relative improvement threshold ...
  int window = 50;         // ... over this many iterations
  bool parallel = true;
};

struct EmbeddingEstimate
{
  double value = 0.0;
  int iterations = 0;       // of the best start
  double spread = 0.0;      // max - min over starts
  bool converged = false;   // false: best-so-far, flagged approximate
  std::vector<double> per_start;
};

// sup ||u||_k / ||grad u||_2 over the Dirichlet-constrained P1 space, by multi-start
// projected ascent: each iterate is replaced by the K-gradient of ||u||_k^k and rescaled to
// ||grad u||_2 = 1. The objective is convex, so every step is an ascent step.
EmbeddingEstimate EstimateEmbeddingConstant(const DiscreteOperators &ops, double k_exp,
                                            const OptimizerOptions &opts = {});

// sup ||u||_{2,Gamma1} / ||grad u||_2 by the same iteration with the boundary numerator.
EmbeddingEstimate EstimateTraceConstant(const DiscreteOperators &ops,
                                        const OptimizerOptions &opts = {});

struct BOmegaEstimate
{
  double value = 0.0;           // amplitude-limit value
  double embedding = 0.0;       // S_k used
  double verified_max = 0.0;    // best finite-amplitude quotient found
  bool consistent = true;       // verified_max <= value + 1e-6
};

// B = S_k / sqrt(l) for kappa > 0 and S_k / sqrt(l + b) for kappa = 0, checked against a
// direct finite-amplitude search.
BOmegaEstimate EstimateBOmega(const DiscreteOperators &ops, const PhysicalParams &params,
                              double l_value, double embedding,
                              const OptimizerOptions &opts = {});
BOmegaEstimate EstimateBOmega(const DiscreteOperators &ops, const PhysicalParams &params,
                              double l_value, const OptimizerOptions &opts = {});

struct WellConstants
{
  double S_k = 0.0;
  double C_star = 0.0;
  double C_bar_star = 0.0;
  double B_Omega = 0.0;
  double lambda1 = 0.0;
  double d1 = 0.0;
  double k_exp = 0.0;
  int dimension = 1;
  std::array<int, 2> resolution{0, 0};
  int iterations = 0;
  double spread = 0.0;
  bool converged = true;
  bool b_consistent = true;
  double b_verified_max = 0.0;
};

WellConstants ComputeWellConstants(const DiscreteOperators &ops, const PhysicalParams &params,
                                   double l_value, const OptimizerOptions &opts = {});

struct StableSetReport
{
  double E0 = 0.0;
  double gamma0 = 0.0;
  double lambda1 = 0.0;
  double d1 = 0.0;
  bool in_well = false;
  double energy_margin = 0.0;  // E0 / d1
  double gamma_margin = 0.0;   // gamma0 / lambda1
};

// gamma(0) has no memory contribution; E(0) is the full energy of the initial data.
StableSetReport CheckInitialMembership(const DiscreteOperators &ops,
                                       const RelaxationKernel &kernel,
                                       const PhysicalParams &params, const Field &u0,
                                       const Field &u1, const BoundaryField &y0,
                                       const WellPair &well);

struct InvarianceVerdict
{
  bool pass = true;
  double first_violation_time = -1.0;
  std::string reason;
  double max_gamma_ratio = 0.0;   // max gamma_fn / lambda1
  double max_energy_ratio = 0.0;  // max E / d1
  double min_f_gap = 0.0;         // min E - F(gamma_fn)
  double min_lower_gap = 0.0;     // min E - (k-2)/(2k) gamma_fn^2 over records with gamma < lambda1
};

// gamma_fn < lambda1 and E < d1 at every record; E >= F(gamma_fn) - tol_E.
InvarianceVerdict VerifyInvariance(const std::vector<EnergyReport> &reports,
                                   const WellConstants &constants, double tol_E = 0.0);

}  // namespace kwave

#endif  // KWAVE_STABLESET_HPP

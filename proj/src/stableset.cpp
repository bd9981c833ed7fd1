// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/stableset.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

namespace kwave
{

double PotentialF(double x, double B, double k_exp)
{
  Require(x >= 0.0, ErrorCode::InvalidArgument, "potential F needs x >= 0");
  return 0.5 * x * x - std::pow(B, k_exp) * std::pow(x, k_exp) / k_exp;
}

WellPair WellConstantsFromB(double B, double k_exp)
{
  Require(B > 0.0, ErrorCode::InvalidArgument, "B_Omega must be positive");
  Require(k_exp > 2.0, ErrorCode::InvalidArgument, "well constants need k > 2");
  WellPair w;
  w.lambda1 = std::pow(B, -k_exp / (k_exp - 2.0));
  w.d1 = (k_exp - 2.0) / (2.0 * k_exp) * std::pow(B, -2.0 * k_exp / (k_exp - 2.0));
  return w;
}

namespace
{

// Stiffness restricted to the free nodes, factored once per estimate.
class FreeSolver
{
public:
  explicit FreeSolver(const DiscreteOperators &ops) : ops_(ops)
  {
    const int n = ops.NumNodes();
    index_.assign(n, -1);
    for (size_t i = 0; i < ops.mesh.free_nodes.size(); i++)
    {
      index_[ops.mesh.free_nodes[i]] = static_cast<int>(i);
    }
    std::vector<Eigen::Triplet<double>> trip;
    for (int c = 0; c < ops.stiffness.outerSize(); c++)
    {
      for (SparseMatrix::InnerIterator it(ops.stiffness, c); it; ++it)
      {
        const int r = index_[it.row()], cc = index_[it.col()];
        if (r >= 0 && cc >= 0)
        {
          trip.emplace_back(r, cc, it.value());
        }
      }
    }
    const int m = static_cast<int>(ops.mesh.free_nodes.size());
    SparseMatrix kff(m, m);
    kff.setFromTriplets(trip.begin(), trip.end());
    solver_.compute(kff);
    Require(solver_.info() == Eigen::Success, ErrorCode::Optimizer,
            "free-node stiffness is not positive definite");
  }

  // Returns x with K_ff x = g on the free nodes and zero on Gamma0.
  Field Solve(const Field &g) const
  {
    const int m = static_cast<int>(ops_.mesh.free_nodes.size());
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; i++)
    {
      rhs[i] = g[ops_.mesh.free_nodes[i]];
    }
    const Eigen::VectorXd x = solver_.solve(rhs);
    Field out = ops_.Zero();
    for (int i = 0; i < m; i++)
    {
      out[ops_.mesh.free_nodes[i]] = x[i];
    }
    return out;
  }

private:
  const DiscreteOperators &ops_;
  std::vector<int> index_;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

struct StartResult
{
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

Field RandomStart(const DiscreteOperators &ops, std::uint64_t seed, bool signed_start)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(signed_start ? -1.0 : 0.0, 1.0);
  Field u = ops.Zero();
  for (int n : ops.mesh.free_nodes)
  {
    u[n] = dist(rng);
  }
  return u;
}

// Maximize N(u) on {u^T K u = 1} by u <- K^{-1} grad N(u), rescaled.
StartResult AscentFromStart(const DiscreteOperators &ops, const FreeSolver &solver,
                            const std::function<double(const Field &)> &objective,
                            const std::function<Field(const Field &)> &gradient, Field u,
                            const OptimizerOptions &opts)
{
  auto normalize = [&](Field &w) {
    const double gs = GradNormSq(ops, w);
    Require(gs > 0.0 && std::isfinite(gs), ErrorCode::Optimizer,
            "optimizer iterate has zero gradient norm");
    w /= std::sqrt(gs);
  };
  normalize(u);
  std::vector<double> values{objective(u)};
  StartResult res;
  for (int it = 1; it <= opts.max_iterations; it++)
  {
    Field next = solver.Solve(gradient(u));
    if (next.squaredNorm() == 0.0)
    {
      break;
    }
    normalize(next);
    const double val = objective(next);
    if (val < values.back())
    {
      // Only roundoff can decrease a convex objective here; the iterate is stationary.
      res.converged = true;
      res.iterations = it;
      break;
    }
    u = std::move(next);
    values.push_back(val);
    res.iterations = it;
    if (it >= opts.window)
    {
      const double old = values[values.size() - 1 - opts.window];
      if (val - old <= opts.rel_tol * std::abs(val))
      {
        res.converged = true;
        break;
      }
    }
  }
  res.value = values.back();
  return res;
}

EmbeddingEstimate MultiStart(const DiscreteOperators &ops,
                             const std::function<double(const Field &)> &objective,
                             const std::function<Field(const Field &)> &gradient,
                             const std::function<double(double)> &to_constant,
                             const OptimizerOptions &opts)
{
  Require(opts.starts >= 1, ErrorCode::InvalidArgument, "optimizer needs at least one start");
  Require(!ops.mesh.free_nodes.empty(), ErrorCode::Optimizer, "mesh has no free nodes");
  const FreeSolver solver(ops);
  auto job = [&](int s) {
    return AscentFromStart(ops, solver, objective, gradient,
                           RandomStart(ops, opts.seed + static_cast<std::uint64_t>(s), s % 2 == 1),
                           opts);
  };
  std::vector<StartResult> results(opts.starts);
  if (opts.parallel && opts.starts > 1)
  {
    std::vector<std::future<StartResult>> futures;
    for (int s = 0; s < opts.starts; s++)
    {
      futures.push_back(std::async(std::launch::async, job, s));
    }
    for (int s = 0; s < opts.starts; s++)
    {
      results[s] = futures[s].get();
    }
  }
  else
  {
    for (int s = 0; s < opts.starts; s++)
    {
      results[s] = job(s);
    }
  }

  EmbeddingEstimate est;
  double lo = 0.0, hi = 0.0;
  for (int s = 0; s < opts.starts; s++)
  {
    const double c = to_constant(results[s].value);
    est.per_start.push_back(c);
    if (s == 0 || c > hi)
    {
      hi = c;
      est.iterations = results[s].iterations;
      est.converged = results[s].converged;
    }
    lo = s == 0 ? c : std::min(lo, c);
  }
  est.value = hi;
  est.spread = hi - lo;
  return est;
}

}  // namespace

EmbeddingEstimate EstimateEmbeddingConstant(const DiscreteOperators &ops, double k_exp,
                                            const OptimizerOptions &opts)
{
  Require(k_exp >= 2.0, ErrorCode::InvalidArgument, "embedding constant needs k >= 2");
  return MultiStart(
      ops, [&](const Field &u) { return LkNormPow(ops, u, k_exp); },
      [&](const Field &u) { return Field(k_exp * SourceVector(ops, u, k_exp)); },
      [&](double v) { return std::pow(v, 1.0 / k_exp); }, opts);
}

EmbeddingEstimate EstimateTraceConstant(const DiscreteOperators &ops,
                                        const OptimizerOptions &opts)
{
  Require(ops.NumGamma1() > 0, ErrorCode::InvalidArgument,
          "trace constant needs a nonempty Gamma1");
  return MultiStart(
      ops, [&](const Field &u) { return TraceNormSq(ops, u); },
      [&](const Field &u) {
        Field g = ops.Zero();
        for (int i = 0; i < ops.NumGamma1(); i++)
        {
          const int n = ops.mesh.gamma1_nodes[i];
          g[n] = 2.0 * ops.mesh.gamma1_weights[i] * u[n];
        }
        ops.Pin(g);
        return g;
      },
      [](double v) { return std::sqrt(v); }, opts);
}

namespace
{

// ||u||_k / sqrt(l G + b / (kappa + 1) G^{kappa + 1}), G = ||grad u||^2.
double BQuotient(const DiscreteOperators &ops, const PhysicalParams &params, double l_value,
                 const Field &u)
{
  const double g = GradNormSq(ops, u);
  const double den = l_value * g + params.b / (params.kappa + 1.0) * std::pow(g, params.kappa + 1.0);
  if (den <= 0.0)
  {
    return 0.0;
  }
  return std::pow(LkNormPow(ops, u, params.k_exp), 1.0 / params.k_exp) / std::sqrt(den);
}

// Preconditioned ascent on log of the B quotient, started at a random amplitude.
double FiniteAmplitudeSearch(const DiscreteOperators &ops, const FreeSolver &solver,
                             const PhysicalParams &params, double l_value, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> amp_exp(-3.0, 1.0);
  Field u = RandomStart(ops, seed ^ 0x9e3779b97f4a7c15ULL, (seed & 1) != 0);
  u *= std::pow(10.0, amp_exp(rng)) / std::sqrt(GradNormSq(ops, u));
  const double k = params.k_exp, kap = params.kappa;
  const double c = params.b / (kap + 1.0);
  double best = BQuotient(ops, params, l_value, u);
  double tau = 1.0;
  for (int it = 0; it < 200; it++)
  {
    const Field ku = ops.ApplyStiffness(u);
    const double g = u.dot(ku);
    const double nk = LkNormPow(ops, u, k);
    const double den = l_value * g + c * std::pow(g, kap + 1.0);
    if (nk <= 0.0 || den <= 0.0)
    {
      break;
    }
    const Field grad = SourceVector(ops, u, k) / nk -
                       (l_value + c * (kap + 1.0) * std::pow(g, kap)) / den * ku;
    const Field dir = solver.Solve(grad);
    bool improved = false;
    for (int ls = 0; ls < 40; ls++)
    {
      const Field trial = u + tau * dir;
      const double q = BQuotient(ops, params, l_value, trial);
      if (q > best)
      {
        best = q;
        u = trial;
        improved = true;
        tau *= 2.0;
        break;
      }
      tau *= 0.5;
    }
    if (!improved)
    {
      break;
    }
  }
  return best;
}

}  // namespace

BOmegaEstimate EstimateBOmega(const DiscreteOperators &ops, const PhysicalParams &params,
                              double l_value, double embedding, const OptimizerOptions &opts)
{
  Require(l_value > 0.0, ErrorCode::Hypothesis, "(H2) violated: l must be positive");
  Require(embedding > 0.0, ErrorCode::InvalidArgument, "embedding constant must be positive");
  BOmegaEstimate est;
  est.embedding = embedding;
  est.value = params.kappa > 0.0 ? embedding / std::sqrt(l_value)
                                 : embedding / std::sqrt(l_value + params.b);
  const FreeSolver solver(ops);
  for (int s = 0; s < opts.starts; s++)
  {
    est.verified_max = std::max(
        est.verified_max,
        FiniteAmplitudeSearch(ops, solver, params, l_value, opts.seed + 1000u + s));
  }
  est.consistent = est.verified_max <= est.value + 1e-6;
  return est;
}

BOmegaEstimate EstimateBOmega(const DiscreteOperators &ops, const PhysicalParams &params,
                              double l_value, const OptimizerOptions &opts)
{
  return EstimateBOmega(ops, params, l_value,
                        EstimateEmbeddingConstant(ops, params.k_exp, opts).value, opts);
}

WellConstants ComputeWellConstants(const DiscreteOperators &ops, const PhysicalParams &params,
                                   double l_value, const OptimizerOptions &opts)
{
  WellConstants wc;
  const EmbeddingEstimate emb = EstimateEmbeddingConstant(ops, params.k_exp, opts);
  wc.S_k = emb.value;
  wc.C_star = emb.value;
  wc.iterations = emb.iterations;
  wc.spread = emb.spread;
  wc.converged = emb.converged;
  if (ops.NumGamma1() > 0)
  {
    const EmbeddingEstimate tr = EstimateTraceConstant(ops, opts);
    wc.C_bar_star = tr.value;
    wc.converged = wc.converged && tr.converged;
  }
  const BOmegaEstimate b = EstimateBOmega(ops, params, l_value, emb.value, opts);
  wc.B_Omega = b.value;
  wc.b_consistent = b.consistent;
  wc.b_verified_max = b.verified_max;
  const WellPair w = WellConstantsFromB(b.value, params.k_exp);
  wc.lambda1 = w.lambda1;
  wc.d1 = w.d1;
  wc.k_exp = params.k_exp;
  wc.dimension = ops.mesh.dimension;
  wc.resolution = ops.mesh.spec.resolution;
  return wc;
}

StableSetReport CheckInitialMembership(const DiscreteOperators &ops,
                                       const RelaxationKernel &kernel,
                                       const PhysicalParams &params, const Field &u0,
                                       const Field &u1, const BoundaryField &y0,
                                       const WellPair &well)
{
  SimState s;
  s.t = 0.0;
  s.u = u0;
  s.v = u1;
  s.y = y0;
  const Field ku = ops.ApplyStiffness(u0);
  s.m_kir = KirchhoffCoefficient(params, u0.dot(ku));
  HistoryBuffer hist(kernel, ops.NumNodes());
  hist.Push(0.0, u0, ku);

  StableSetReport r;
  r.E0 = ComputeEnergy(s, hist, kernel, params, ops).E;
  r.gamma0 = ComputeGammaFn(s, hist, kernel, params, ops);
  r.lambda1 = well.lambda1;
  r.d1 = well.d1;
  r.in_well = r.E0 < r.d1 && r.gamma0 < r.lambda1;
  r.energy_margin = r.E0 / r.d1;
  r.gamma_margin = r.gamma0 / r.lambda1;
  return r;
}

InvarianceVerdict VerifyInvariance(const std::vector<EnergyReport> &reports,
                                   const WellConstants &constants, double tol_E)
{
  InvarianceVerdict v;
  const double k = constants.k_exp;
  bool first_gap = true, first_lower = true;
  for (const EnergyReport &r : reports)
  {
    v.max_gamma_ratio = std::max(v.max_gamma_ratio, r.gamma_fn / constants.lambda1);
    v.max_energy_ratio = std::max(v.max_energy_ratio, r.E / constants.d1);
    const double f_gap = r.E - PotentialF(r.gamma_fn, constants.B_Omega, k);
    v.min_f_gap = first_gap ? f_gap : std::min(v.min_f_gap, f_gap);
    first_gap = false;
    if (r.gamma_fn < constants.lambda1)
    {
      const double lower = r.E - (k - 2.0) / (2.0 * k) * r.gamma_fn * r.gamma_fn;
      v.min_lower_gap = first_lower ? lower : std::min(v.min_lower_gap, lower);
      first_lower = false;
    }
    if (!v.pass)
    {
      continue;
    }
    std::ostringstream os;
    os.precision(15);
    if (!(r.gamma_fn < constants.lambda1))
    {
      os << "gamma_fn = " << r.gamma_fn << " reaches lambda1 = " << constants.lambda1;
    }
    else if (!(r.E < constants.d1))
    {
      os << "E = " << r.E << " reaches d1 = " << constants.d1;
    }
    else if (f_gap < -tol_E)
    {
      os << "E = " << r.E << " is below F(gamma_fn) by " << -f_gap;
    }
    else
    {
      continue;
    }
    v.pass = false;
    v.first_violation_time = r.t;
    v.reason = os.str();
  }
  return v;
}

}  // namespace kwave

// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace kwave
{

using nlohmann::json;
namespace fs = std::filesystem;

namespace
{

constexpr const char *kVersion = "0.3.0";

// NaN and infinities have no JSON number form.
json Num(double v)
{
  return std::isfinite(v) ? json(v) : json(nullptr);
}

void WriteText(const fs::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
  }
  out << text;
}

std::string Dump(const json &j)
{
  return j.dump(2) + "\n";
}

json ToJson(const WellConstants &wc)
{
  return {{"S_k", Num(wc.S_k)},
          {"C_star", Num(wc.C_star)},
          {"C_bar_star", Num(wc.C_bar_star)},
          {"B_Omega", Num(wc.B_Omega)},
          {"lambda1", Num(wc.lambda1)},
          {"d1", Num(wc.d1)},
          {"k", wc.k_exp},
          {"mesh",
           {{"dimension", wc.dimension},
            {"resolution", std::vector<int>(wc.resolution.begin(),
                                            wc.resolution.begin() + wc.dimension)}}},
          {"optimizer",
           {{"iterations", wc.iterations},
            {"spread", Num(wc.spread)},
            {"converged", wc.converged},
            {"approximate", !wc.converged}}},
          {"B_Omega_verification",
           {{"finite_amplitude_max", Num(wc.b_verified_max)}, {"consistent", wc.b_consistent}}}};
}

json ToJson(const HypothesisReport &rep)
{
  json verdicts = json::array();
  for (const Verdict &v : rep.verdicts)
  {
    verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
  }
  return {{"all_pass", rep.AllPass()},
          {"theta", Num(rep.theta)},
          {"r", Num(rep.r)},
          {"exp_r", Num(rep.exp_r)},
          {"l", Num(rep.l)},
          {"xi_sup", Num(rep.xi_sup)},
          {"xi_prime_l1", Num(rep.xi_prime_l1)},
          {"max_g_identity_error", Num(rep.max_g_identity_error)},
          {"horizon", rep.horizon},
          {"grid_points", rep.grid_points},
          {"verdicts", verdicts}};
}

json ToJson(const StableSetReport &rep)
{
  return {{"E0", Num(rep.E0)},
          {"gamma0", Num(rep.gamma0)},
          {"lambda1", Num(rep.lambda1)},
          {"d1", Num(rep.d1)},
          {"in_well", rep.in_well},
          {"energy_margin", Num(rep.energy_margin)},
          {"gamma_margin", Num(rep.gamma_margin)}};
}

json ToJson(const InvarianceVerdict &v)
{
  return {{"pass", v.pass},
          {"first_violation_time", v.pass ? json(nullptr) : Num(v.first_violation_time)},
          {"reason", v.reason},
          {"max_gamma_ratio", Num(v.max_gamma_ratio)},
          {"max_energy_ratio", Num(v.max_energy_ratio)},
          {"min_E_minus_F_gamma", Num(v.min_f_gap)},
          {"min_E_minus_lower_bound", Num(v.min_lower_gap)}};
}

json ToJson(const LinearFit &f)
{
  return {{"slope", Num(f.slope)}, {"intercept", Num(f.intercept)}, {"r2", Num(f.r2)},
          {"samples", f.n}};
}

json ToJson(const MartinezResult &m)
{
  return {{"hypothesis", ToString(m.hypothesis)},
          {"conclusion", ToString(m.conclusion)},
          {"hypothesis_margin", Num(m.hypothesis_margin)},
          {"worst_S", Num(m.worst_S)},
          {"conclusion_margin", Num(m.conclusion_margin)},
          {"worst_t", Num(m.worst_t)},
          {"detail", m.detail}};
}

json ToJson(const DecayReport &rep)
{
  json rho = json::array();
  for (size_t i = 0; i < rep.rho.S.size(); i++)
  {
    rho.push_back({Num(rep.rho.S[i]), Num(rep.rho.rho[i])});
  }
  return {{"horizon", rep.horizon},
          {"E0", Num(rep.E0)},
          {"omega_max", rep.omega.trivial ? json(nullptr) : Num(rep.omega.omega_max)},
          {"omega_trivial", rep.omega.trivial},
          {"omega_holds", rep.omega.holds},
          {"omega_sharp", rep.omega.sharp},
          {"omega_attained_at", Num(rep.omega.attained_at)},
          {"t_tail", rep.t_tail},
          {"tail_lnE_vs_phi", ToJson(rep.tail_phi)},
          {"tail_lnE_vs_log1p_t", ToJson(rep.tail_log_time)},
          {"t0", rep.t0},
          {"rho", rho},
          {"max_rho", Num(rep.rho.max_rho)},
          {"rho_finite", rep.rho.finite},
          {"rho_violation", rep.rho.violation},
          {"max_increase", Num(rep.max_increase)},
          {"monotone", rep.monotone},
          {"horizon_stability",
           {{"omega_half_horizon", Num(rep.omega_half)},
            {"max_rho_half_horizon", Num(rep.max_rho_half)},
            {"omega_change", Num(rep.omega_change)},
            {"max_rho_change", Num(rep.rho_change)}}},
          {"martinez", ToJson(rep.martinez)}};
}

std::string Fmt(double v)
{
  std::ostringstream os;
  os << std::setprecision(15) << v;
  return os.str();
}

void WritePlot(const fs::path &path, const std::vector<std::pair<double, double>> &rows)
{
  std::ostringstream os;
  for (const auto &[x, y] : rows)
  {
    os << Fmt(x) << ' ' << Fmt(y) << '\n';
  }
  WriteText(path, os.str());
}

// Kernel family decides which tail regression characterizes the decay.
bool DecayFormPass(const RunConfig &cfg, const DecayReport &rep, json &out)
{
  if (rep.E0 == 0.0)
  {
    out["form"] = "trivial: zero energy";
    return true;
  }
  const bool omega_ok = !rep.omega.trivial && rep.omega.omega_max > 0.0;
  if (cfg.kernel.family == "constant")
  {
    out["form"] = "ln E vs Phi";
    return omega_ok && rep.tail_phi.slope < 0.0 && rep.tail_phi.r2 >= 0.95;
  }
  if (cfg.kernel.family == "power_law")
  {
    out["form"] = "ln E vs ln(1+t)";
    return omega_ok && rep.tail_log_time.slope < 0.0 && rep.tail_log_time.r2 >= 0.95;
  }
  out["form"] = "omega_max > 0";
  return omega_ok;
}

struct Prepared
{
  Mesh mesh;
  DiscreteOperators ops;
  RelaxationKernel kernel = RelaxationKernel::Zero(1.0);
};

Prepared Prepare(const RunConfig &cfg)
{
  ValidateConfig(cfg);
  Prepared p;
  p.mesh = BuildMesh(cfg.domain);
  p.ops = Assemble(p.mesh, cfg.physics);
  p.kernel = MakeKernel(cfg);
  return p;
}

double HypothesisHorizon(const RunConfig &cfg)
{
  return cfg.analysis.hypothesis_horizon > 0.0 ? cfg.analysis.hypothesis_horizon
                                               : cfg.stepping.t_end;
}

}  // namespace

InitialData MakeInitialData(const RunConfig &cfg, const DiscreteOperators &ops)
{
  InitialData d;
  d.u0 = EvaluateProfile(cfg.initial.displacement, ops.mesh);
  d.u1 = EvaluateProfile(cfg.initial.velocity, ops.mesh);
  d.y0 = BoundaryField::Constant(ops.NumGamma1(), cfg.initial.y0);
  return d;
}

OptimizerOptions MakeOptimizerOptions(const RunConfig &cfg)
{
  OptimizerOptions o;
  o.starts = cfg.analysis.optimizer_starts;
  o.max_iterations = cfg.analysis.optimizer_max_iterations;
  o.seed = cfg.seed;
  return o;
}

double EnergyTolerance(const RunConfig &cfg, double h, double E0)
{
  const double dt = cfg.stepping.dt;
  return cfg.analysis.tol_energy * (dt * dt + h * h) * std::abs(E0);
}

double IdentityTolerance(const RunConfig &cfg, double h, double E0)
{
  // The rate is differenced between records, so the record interval sets the time scale.
  const double dt = cfg.stepping.dt * cfg.stepping.record_every;
  return cfg.analysis.tol_identity * (dt * dt + h * h) * std::abs(E0);
}

void WriteTrajectoryCsv(std::ostream &os, const Trajectory &traj)
{
  const int m = traj.records.empty() ? 0 : static_cast<int>(traj.records[0].state.y.size());
  os << "t,E,kinetic,elastic,kirchhoff,boundary,memory,source,gamma_fn,u_l2,grad_u_l2";
  for (int i = 0; i < m; i++)
  {
    os << ",y_" << i;
  }
  os << ",E_rate_residual\n";
  os << std::setprecision(15);
  for (const Record &r : traj.records)
  {
    const EnergyReport &e = r.energy;
    os << e.t << ',' << e.E << ',' << e.kinetic << ',' << e.elastic << ',' << e.kirchhoff << ','
       << e.boundary << ',' << e.memory << ',' << e.source << ',' << e.gamma_fn << ','
       << e.u_l2 << ',' << e.grad_u_l2;
    for (int i = 0; i < m; i++)
    {
      os << ',' << r.state.y[i];
    }
    os << ',';
    if (std::isfinite(e.rate_residual))
    {
      os << e.rate_residual;
    }
    else
    {
      os << "nan";
    }
    os << '\n';
  }
}

CsvEnergy ReadTrajectoryCsv(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw Error(ErrorCode::Io, "cannot open trajectory '" + path + "'");
  }
  std::string line;
  Require(static_cast<bool>(std::getline(in, line)), ErrorCode::Parse,
          "trajectory '" + path + "' is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
      header.push_back(cell);
    }
  }
  const auto col = [&](const std::string &name) {
    auto it = std::find(header.begin(), header.end(), name);
    Require(it != header.end(), ErrorCode::Parse,
            "trajectory '" + path + "' has no column '" + name + "'");
    return static_cast<size_t>(it - header.begin());
  };
  const size_t ct = col("t"), ce = col("E");
  CsvEnergy out;
  int lineno = 1;
  while (std::getline(in, line))
  {
    lineno++;
    if (line.empty())
    {
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
    {
      cells.push_back(cell);
    }
    Require(cells.size() > std::max(ct, ce), ErrorCode::Parse,
            "trajectory line " + std::to_string(lineno) + " is truncated");
    try
    {
      out.t.push_back(std::stod(cells[ct]));
      out.E.push_back(std::stod(cells[ce]));
    }
    catch (const std::exception &)
    {
      throw Error(ErrorCode::Parse,
                  "trajectory line " + std::to_string(lineno) + " has a malformed number");
    }
  }
  return out;
}

std::string WellConstantsJson(const WellConstants &wc)
{
  return Dump(ToJson(wc));
}

std::string HypothesisJson(const HypothesisReport &rep)
{
  return Dump(ToJson(rep));
}

std::string StableSetJson(const StableSetReport &rep, const InvarianceVerdict *inv)
{
  json j = ToJson(rep);
  j["invariance"] = inv ? ToJson(*inv) : json(nullptr);
  return Dump(j);
}

std::string DecayJson(const DecayReport &rep)
{
  return Dump(ToJson(rep));
}

std::string ConvergenceJson(const ConvergenceStudy &study, const std::string &profile)
{
  json levels = json::array();
  for (const ConvergenceLevel &l : study.levels)
  {
    levels.push_back({{"resolution", l.resolution},
                      {"dt", l.dt},
                      {"l2_error", Num(l.l2_error)},
                      {"ratio", l.ratio > 0.0 ? Num(l.ratio) : json(nullptr)}});
  }
  return Dump({{"profile", profile}, {"levels", levels}, {"min_ratio", Num(study.min_ratio)}});
}

std::string RunScenario(const RunConfig &cfg, const std::string &outdir)
{
  const Prepared prep = Prepare(cfg);
  const DiscreteOperators &ops = prep.ops;
  const RelaxationKernel &kernel = prep.kernel;
  const AnalysisSpec &an = cfg.analysis;
  const fs::path dir(outdir);
  fs::create_directories(dir);
  fs::remove(dir / "ABORTED");

  json summary = {{"name", cfg.name}, {"output_directory", outdir}};
  json verdicts = json::object();
  const InitialData init = MakeInitialData(cfg, ops);

  if (an.Enabled("hypotheses"))
  {
    if (kernel.IsZero())
    {
      verdicts["hypotheses"] = {{"pass", true}, {"detail", "zero kernel: no memory hypotheses"}};
    }
    else
    {
      const HypothesisReport hr =
          ValidateHypotheses(kernel, {cfg.physics.p, cfg.physics.q}, HypothesisHorizon(cfg));
      WriteText(dir / "hypotheses.json", HypothesisJson(hr));
      verdicts["hypotheses"] = {{"pass", hr.AllPass()}};
    }
  }

  std::optional<WellConstants> wc;
  std::optional<StableSetReport> membership;
  if (an.Enabled("constants") || an.Enabled("membership") || an.Enabled("invariance"))
  {
    wc = ComputeWellConstants(ops, cfg.physics, kernel.L(), MakeOptimizerOptions(cfg));
    WriteText(dir / "well_constants.json", WellConstantsJson(*wc));
    verdicts["constants"] = {{"pass", wc->converged && wc->b_consistent}};
    membership = CheckInitialMembership(ops, kernel, cfg.physics, init.u0, init.u1, init.y0,
                                        {wc->lambda1, wc->d1});
    verdicts["membership"] = {{"in_well", membership->in_well}};
  }

  json meta = {
      {"version", kVersion},
      {"config", json::parse(SerializeConfig(cfg))},
      {"seed", cfg.seed},
      {"mesh",
       {{"nodes", ops.NumNodes()},
        {"elements", prep.mesh.NumElements()},
        {"h", prep.mesh.h},
        {"gamma1_nodes", ops.NumGamma1()}}},
      {"quadrature", {{"points_per_axis", ops.quad_points}, {"k", cfg.physics.k_exp}}},
  };

  const StepperConfig sc = MakeStepperConfig(cfg);
  Trajectory traj;
  try
  {
    traj = Run(ops, kernel, cfg.physics, sc, init.u0, init.u1, init.y0);
  }
  catch (const SimulationAbort &abort)
  {
    std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
    WriteTrajectoryCsv(csv, abort.partial());
    std::ostringstream os;
    os << "code " << static_cast<int>(abort.code()) << " at t = " << abort.time() << ": "
       << abort.what() << "\n";
    WriteText(dir / "ABORTED", os.str());
    meta["aborted"] = {{"time", abort.time()}, {"message", abort.what()}};
    WriteText(dir / "run_metadata.json", Dump(meta));
    throw;
  }
  catch (const Error &e)
  {
    std::ostringstream os;
    os << "code " << static_cast<int>(e.code()) << " at t = 0: " << e.what() << "\n";
    WriteText(dir / "ABORTED", os.str());
    meta["aborted"] = {{"time", 0.0}, {"message", e.what()}};
    WriteText(dir / "run_metadata.json", Dump(meta));
    throw;
  }
  {
    std::ofstream csv(dir / "trajectory.csv", std::ios::binary);
    WriteTrajectoryCsv(csv, traj);
  }

  const std::vector<EnergyReport> reports = traj.Reports();
  const double E0 = reports.front().E;
  const double h = prep.mesh.h;
  const double tol_E = EnergyTolerance(cfg, h, E0);
  const double tol_id = IdentityTolerance(cfg, h, E0);
  meta["tolerances"] = {{"tol_E", tol_E},
                        {"tol_energy_constant", an.tol_energy},
                        {"identity_bound", tol_id},
                        {"tol_identity_constant", an.tol_identity}};
  meta["history"] = {{"storage", ToString(cfg.stepping.storage.policy)},
                     {"path", cfg.stepping.path},
                     {"recursive", kernel.FastPath() && cfg.stepping.path != "quadrature"}};
  meta["initial_flux_residual"] = traj.initial_flux_residual;
  WriteText(dir / "run_metadata.json", Dump(meta));

  std::vector<std::pair<double, double>> plot_e;
  double max_increase = 0.0;
  for (size_t j = 0; j < reports.size(); j++)
  {
    plot_e.emplace_back(reports[j].t, reports[j].E);
    if (j > 0)
    {
      max_increase = std::max(max_increase, reports[j].E - reports[j - 1].E);
    }
  }
  WritePlot(dir / "energy.dat", plot_e);
  verdicts["monotone"] = {{"pass", max_increase <= tol_E},
                          {"max_increase", max_increase},
                          {"tol_E", tol_E}};

  if (an.Enabled("identity"))
  {
    double max_res = 0.0;
    for (const EnergyReport &r : reports)
    {
      if (std::isfinite(r.rate_residual))
      {
        max_res = std::max(max_res, std::abs(r.rate_residual));
      }
    }
    verdicts["identity"] = {{"pass", max_res <= tol_id},
                            {"max_residual", max_res},
                            {"bound", tol_id}};
  }

  if (wc)
  {
    std::optional<InvarianceVerdict> inv;
    if (an.Enabled("invariance"))
    {
      inv = VerifyInvariance(reports, *wc, tol_E);
      verdicts["invariance"] = {{"pass", inv->pass},
                                {"applicable", membership->in_well},
                                {"max_gamma_ratio", inv->max_gamma_ratio}};
    }
    WriteText(dir / "stable_set.json", StableSetJson(*membership, inv ? &*inv : nullptr));
  }

  if (an.Enabled("decay"))
  {
    json dv;
    const bool negative = std::any_of(reports.begin(), reports.end(),
                                      [](const EnergyReport &r) { return r.E < 0.0; });
    if (kernel.IsZero())
    {
      dv = {{"pass", nullptr}, {"detail", "zero kernel: no rate function"}};
    }
    else if (negative)
    {
      dv = {{"pass", false}, {"detail", "energy became negative; decay analysis skipped"}};
    }
    else
    {
      try
      {
        const SampledEnergy se = SampleFromRate(traj.Times(), traj.Energies(), kernel.rate());
        DecayOptions dopt;
        dopt.t_tail = an.t_tail;
        dopt.t0 = an.t0;
        dopt.s_count = an.s_count;
        dopt.s_fraction = an.s_fraction;
        dopt.tol_E = tol_E;
        const DecayReport dr = AnalyzeDecay(se, kernel, dopt);
        WriteText(dir / "decay_report.json", DecayJson(dr));
        std::vector<std::pair<double, double>> plot_phi, plot_rho;
        for (size_t j = 0; j < se.size(); j++)
        {
          if (se.E[j] > 0.0)
          {
            plot_phi.emplace_back(se.phi[j], std::log(se.E[j]));
          }
        }
        for (size_t i = 0; i < dr.rho.S.size(); i++)
        {
          plot_rho.emplace_back(dr.rho.S[i], dr.rho.rho[i]);
        }
        WritePlot(dir / "phi_lnE.dat", plot_phi);
        WritePlot(dir / "rho.dat", plot_rho);
        const bool form = DecayFormPass(cfg, dr, dv);
        dv["form_pass"] = form;
        dv["rho_finite"] = dr.rho.finite && !dr.rho.violation;
        dv["omega_max"] = dr.omega.trivial ? json(nullptr) : Num(dr.omega.omega_max);
        dv["max_rho"] = Num(dr.rho.max_rho);
        dv["pass"] = form && dr.rho.finite && !dr.rho.violation;
      }
      catch (const Error &e)
      {
        dv = {{"pass", false}, {"detail", e.what()}};
      }
    }
    verdicts["decay"] = dv;
  }

  summary["completed"] = true;
  summary["records"] = reports.size();
  summary["E0"] = E0;
  summary["E_final"] = reports.back().E;
  summary["verdicts"] = verdicts;
  WriteText(dir / "summary.json", Dump(summary));
  return Dump(summary);
}

std::string ComputeConstantsJson(const RunConfig &cfg)
{
  const Prepared prep = Prepare(cfg);
  return WellConstantsJson(
      ComputeWellConstants(prep.ops, cfg.physics, prep.kernel.L(), MakeOptimizerOptions(cfg)));
}

std::string CheckKernelJson(const RunConfig &cfg)
{
  const Prepared prep = Prepare(cfg);
  Require(!prep.kernel.IsZero(), ErrorCode::Validation,
          "check-kernel needs a nonzero kernel family");
  return HypothesisJson(
      ValidateHypotheses(prep.kernel, {cfg.physics.p, cfg.physics.q}, HypothesisHorizon(cfg)));
}

std::string DecayReportFromCsv(const RunConfig &cfg, const std::string &csv_path)
{
  const Prepared prep = Prepare(cfg);
  Require(!prep.kernel.IsZero(), ErrorCode::Validation,
          "decay-report needs a nonzero kernel family");
  const CsvEnergy csv = ReadTrajectoryCsv(csv_path);
  Require(csv.t.size() >= 2, ErrorCode::Parse, "trajectory has fewer than two records");
  const SampledEnergy se = SampleFromRate(csv.t, csv.E, prep.kernel.rate());
  DecayOptions dopt;
  dopt.t_tail = cfg.analysis.t_tail;
  dopt.t0 = cfg.analysis.t0;
  dopt.s_count = cfg.analysis.s_count;
  dopt.s_fraction = cfg.analysis.s_fraction;
  dopt.tol_E = EnergyTolerance(cfg, prep.mesh.h, csv.E.front());
  return DecayJson(AnalyzeDecay(se, prep.kernel, dopt));
}

std::string RunMmsJson(const RunConfig &cfg)
{
  const Prepared prep = Prepare(cfg);
  const ConvergenceStudy study =
      RunConvergenceStudy(cfg.analysis.mms_profile, cfg.domain, cfg.physics, prep.kernel,
                          cfg.stepping.dt, cfg.stepping.t_end, cfg.analysis.mms_levels);
  return ConvergenceJson(study, cfg.analysis.mms_profile);
}

std::string RunSweep(const RunConfig &cfg, const std::vector<double> &amplitudes,
                     const std::string &outdir)
{
  Require(!amplitudes.empty(), ErrorCode::InvalidArgument, "sweep needs at least one amplitude");
  ValidateConfig(cfg);
  const size_t n = amplitudes.size();
  std::vector<json> results(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++)
    {
      RunConfig c = cfg;
      c.initial.displacement.amplitude = amplitudes[i];
      const std::string sub = (fs::path(outdir) / ("amp_" + std::to_string(i))).string();
      c.output_directory = sub;
      json r = {{"index", i}, {"amplitude", amplitudes[i]}, {"directory", sub}};
      try
      {
        r["summary"] = json::parse(RunScenario(c, sub));
      }
      catch (const Error &e)
      {
        r["error"] = {{"code", static_cast<int>(e.code())}, {"message", e.what()}};
      }
      results[i] = std::move(r);
    }
  };
  const size_t threads =
      std::min<size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> pool;
  for (size_t t = 0; t < threads; t++)
  {
    pool.push_back(std::async(std::launch::async, worker));
  }
  for (auto &f : pool)
  {
    f.get();
  }
  json out = {{"name", cfg.name}, {"scenarios", results}};
  fs::create_directories(outdir);
  WriteText(fs::path(outdir) / "sweep.json", Dump(out));
  return Dump(out);
}

}  // namespace kwave

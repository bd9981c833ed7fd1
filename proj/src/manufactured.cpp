// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/manufactured.hpp"

#include <boost/math/constants/constants.hpp>
#include <cmath>

#include "kwave/quadrature.hpp"

namespace kwave
{

namespace
{

double MemoryIntegral(const RelaxationKernel &kernel, const std::function<double(double)> &f,
                      double t)
{
  if (kernel.IsZero() || t <= 0.0)
  {
    return 0.0;
  }
  return Integrate([&](double s) { return kernel.G(t - s) * f(s); }, 0.0, t, 1e-12);
}

}  // namespace

ManufacturedCase BuildManufacturedCase(const ExactSolution &exact, const DiscreteOperators &ops,
                                       const PhysicalParams &params,
                                       const RelaxationKernel &kernel, double horizon)
{
  const Mesh &mesh = ops.mesh;
  for (int n : mesh.dirichlet_nodes)
  {
    for (double t : {0.0, 0.37, 1.1, horizon})
    {
      Require(std::abs(exact.u(mesh.nodes[n], t)) <= 1e-12, ErrorCode::Validation,
              "manufactured solution does not vanish on Gamma0");
    }
  }

  ManufacturedCase mc;
  auto m_kir = [params, exact](double t) {
    return KirchhoffCoefficient(params, exact.grad_norm_sq(t));
  };

  mc.forcing.body = [exact, params, kernel, m_kir](const Point &x, double t) {
    double f = exact.u_tt(x, t) - m_kir(t) * exact.laplacian(x, t) +
               MemoryIntegral(kernel, [&](double s) { return exact.laplacian(x, s); }, t);
    if (params.source)
    {
      const double u = exact.u(x, t);
      f -= std::pow(std::abs(u), params.k_exp - 2.0) * u;
    }
    return f;
  };
  mc.forcing.flux = [exact, kernel, m_kir](const Point &x, double t) {
    return m_kir(t) * exact.normal_derivative(x, t) -
           MemoryIntegral(kernel, [&](double s) { return exact.normal_derivative(x, s); }, t) -
           exact.y_t(x, t);
  };
  mc.forcing.boundary = [exact, params](const Point &x, double t) {
    return exact.u_t(x, t) + params.p * exact.y_t(x, t) + params.q * exact.y(x, t);
  };

  mc.u0 = ops.Zero();
  mc.u1 = ops.Zero();
  for (int n : mesh.free_nodes)
  {
    mc.u0[n] = exact.u(mesh.nodes[n], 0.0);
    mc.u1[n] = exact.u_t(mesh.nodes[n], 0.0);
  }
  mc.y0.resize(ops.NumGamma1());
  for (int i = 0; i < ops.NumGamma1(); i++)
  {
    const Point &x = mesh.nodes[mesh.gamma1_nodes[i]];
    mc.y0[i] = exact.y(x, 0.0);
    for (int j = 0; j <= 20; j++)
    {
      const double t = horizon * j / 20.0;
      mc.max_flux_residual = std::max(mc.max_flux_residual, std::abs(mc.forcing.flux(x, t)));
      mc.max_boundary_residual =
          std::max(mc.max_boundary_residual, std::abs(mc.forcing.boundary(x, t)));
    }
  }
  return mc;
}

ExactSolution SeparableSolution1D(const std::string &profile, const DomainSpec &domain,
                                  const PhysicalParams &params, double amplitude)
{
  Require(domain.dimension == 1, ErrorCode::Validation,
          "separable manufactured solutions are one-dimensional");
  Require(domain.gamma1_faces.size() == 1, ErrorCode::Validation,
          "separable manufactured solutions need exactly one acoustic endpoint");
  const double L = domain.extent[0];
  const bool right = domain.gamma1_faces.front() == Face::Right;
  const double pi = boost::math::constants::pi<double>();

  // X, X', X'' in the distance coordinate s.
  std::function<double(double)> X, dX, ddX;
  if (profile == "linear")
  {
    X = [=](double s) { return amplitude * s / L; };
    dX = [=](double) { return amplitude / L; };
    ddX = [](double) { return 0.0; };
  }
  else if (profile == "sine")
  {
    const double k = pi / (2.0 * L);
    X = [=](double s) { return amplitude * std::sin(k * s); };
    dX = [=](double s) { return amplitude * k * std::cos(k * s); };
    ddX = [=](double s) { return -amplitude * k * k * std::sin(k * s); };
  }
  else
  {
    throw Error(ErrorCode::Validation, "unknown manufactured profile '" + profile + "'");
  }
  auto s_of = [=](const Point &x) { return right ? x[0] : L - x[0]; };

  // int_0^L X'(s)^2 ds.
  const double grad_sq = Integrate([&](double s) { return dX(s) * dX(s); }, 0.0, L, 1e-14);

  ExactSolution ex;
  ex.u = [=](const Point &x, double t) { return X(s_of(x)) * std::cos(t); };
  ex.u_t = [=](const Point &x, double t) { return -X(s_of(x)) * std::sin(t); };
  ex.u_tt = [=](const Point &x, double t) { return -X(s_of(x)) * std::cos(t); };
  ex.laplacian = [=](const Point &x, double t) { return ddX(s_of(x)) * std::cos(t); };
  ex.normal_derivative = [=](const Point &, double t) { return dX(L) * std::cos(t); };
  ex.grad_norm_sq = [=](double t) { return grad_sq * std::cos(t) * std::cos(t); };

  // p y' + q y = X(L) sin t, y(0) = 0.
  const double c = params.q / params.p;
  const double A = X(L) / params.p / (1.0 + c * c);
  ex.y = [=](const Point &, double t) {
    return A * (c * std::sin(t) - std::cos(t) + std::exp(-c * t));
  };
  ex.y_t = [=](const Point &, double t) {
    return A * (c * std::cos(t) + std::sin(t) - c * std::exp(-c * t));
  };
  return ex;
}

ConvergenceStudy RunConvergenceStudy(const std::string &profile, DomainSpec domain,
                                     const PhysicalParams &params,
                                     const RelaxationKernel &kernel, double dt0, double t_end,
                                     int levels)
{
  Require(levels >= 2, ErrorCode::Validation, "convergence study needs at least two levels");
  ConvergenceStudy study;
  const int n0 = domain.resolution[0];
  const ExactSolution exact = SeparableSolution1D(profile, domain, params);
  for (int l = 0; l < levels; l++)
  {
    domain.resolution[0] = n0 << l;
    const Mesh mesh = BuildMesh(domain);
    const DiscreteOperators ops = Assemble(mesh, params);
    const ManufacturedCase mc = BuildManufacturedCase(exact, ops, params, kernel, t_end);

    StepperConfig cfg;
    cfg.dt = dt0 / static_cast<double>(1 << l);
    cfg.t_end = t_end;
    cfg.record_every = static_cast<int>(std::lround(t_end / cfg.dt));
    cfg.forcing = mc.forcing;
    Simulation sim(ops, kernel, params, cfg, mc.u0, mc.u1, mc.y0);
    for (int s = 0; s < cfg.record_every; s++)
    {
      sim.Step();
    }
    Field err = sim.state().u;
    for (int n : mesh.free_nodes)
    {
      err[n] -= exact.u(mesh.nodes[n], sim.state().t);
    }
    ConvergenceLevel lvl;
    lvl.resolution = domain.resolution[0];
    lvl.dt = cfg.dt;
    lvl.l2_error = std::sqrt(std::max(L2NormSq(ops, err), 0.0));
    if (!study.levels.empty())
    {
      lvl.ratio = study.levels.back().l2_error / lvl.l2_error;
    }
    study.levels.push_back(lvl);
  }
  study.min_ratio = study.levels[1].ratio;
  for (size_t l = 1; l < study.levels.size(); l++)
  {
    study.min_ratio = std::min(study.min_ratio, study.levels[l].ratio);
  }
  return study;
}

}  // namespace kwave

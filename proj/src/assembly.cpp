// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/assembly.hpp"

#include <cmath>
#include <ostream>
#include <sstream>
#include <vector>

#include "kwave/error.hpp"

namespace kwave
{

void ValidateParams(const PhysicalParams &params, int dimension)
{
  std::vector<std::string> errors;
  if (!(params.a > 0.0))
  {
    errors.push_back("physics.a must be positive");
  }
  if (!(params.b >= 0.0))
  {
    errors.push_back("physics.b must be nonnegative");
  }
  if (!(params.kappa >= 0.0))
  {
    errors.push_back("physics.kappa must be nonnegative");
  }
  if (!(params.k_exp > 2.0))
  {
    errors.push_back("physics.k must exceed 2");
  }
  if (dimension >= 3 && params.k_exp > (2.0 * dimension - 2.0) / (dimension - 2.0))
  {
    errors.push_back("physics.k exceeds (2n-2)/(n-2)");
  }
  if (!(params.p >= 0.0) || !std::isfinite(params.p))
  {
    errors.push_back("physics.p must be finite and nonnegative");
  }
  if (!(params.q >= 0.0) || !std::isfinite(params.q))
  {
    errors.push_back("physics.q must be finite and nonnegative");
  }
  if (!errors.empty())
  {
    std::ostringstream os;
    for (size_t i = 0; i < errors.size(); i++)
    {
      os << (i ? "; " : "") << errors[i];
    }
    throw Error(ErrorCode::Validation, os.str());
  }
}

int QuadraturePointsFor(double k_exp)
{
  // 2n - 1 >= 2 ceil(k) in 1D; the collapsed triangle rule has the same exactness.
  return static_cast<int>(std::ceil(k_exp)) + 1;
}

void DiscreteOperators::Pin(Field &f) const
{
  for (int n : mesh.dirichlet_nodes)
  {
    f[n] = 0.0;
  }
}

Field DiscreteOperators::ApplyStiffness(const Field &u) const
{
  Field ku = stiffness * u;
  Pin(ku);
  return ku;
}

BoundaryField DiscreteOperators::Trace(const Field &u) const
{
  BoundaryField y(NumGamma1());
  for (int i = 0; i < NumGamma1(); i++)
  {
    y[i] = u[mesh.gamma1_nodes[i]];
  }
  return y;
}

Field DiscreteOperators::ExtendBoundary(const BoundaryField &y) const
{
  Field f = Zero();
  for (int i = 0; i < NumGamma1(); i++)
  {
    f[mesh.gamma1_nodes[i]] = y[i];
  }
  return f;
}

DiscreteOperators Assemble(const Mesh &mesh, const PhysicalParams &params)
{
  return Assemble(mesh, QuadraturePointsFor(params.k_exp));
}

DiscreteOperators Assemble(const Mesh &mesh, int quad_points)
{
  DiscreteOperators ops;
  ops.mesh = mesh;
  ops.quad_points = quad_points;
  ops.segment_rule = GaussLegendre(quad_points);
  ops.triangle_rule = CollapsedTriangleRule(quad_points);

  const int n = mesh.NumNodes();
  std::vector<Eigen::Triplet<double>> kt, mt;
  if (mesh.dimension == 1)
  {
    for (const auto &e : mesh.elements)
    {
      const int i = e[0], j = e[1];
      const double h = mesh.nodes[j][0] - mesh.nodes[i][0];
      kt.emplace_back(i, i, 1.0 / h);
      kt.emplace_back(j, j, 1.0 / h);
      kt.emplace_back(i, j, -1.0 / h);
      kt.emplace_back(j, i, -1.0 / h);
      mt.emplace_back(i, i, h / 3.0);
      mt.emplace_back(j, j, h / 3.0);
      mt.emplace_back(i, j, h / 6.0);
      mt.emplace_back(j, i, h / 6.0);
    }
  }
  else
  {
    for (const auto &e : mesh.elements)
    {
      const auto &p0 = mesh.nodes[e[0]], &p1 = mesh.nodes[e[1]], &p2 = mesh.nodes[e[2]];
      const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
      const double area = 0.5 * std::abs(det);
      // Gradients of the barycentric coordinates.
      const double gx[3] = {(p1[1] - p2[1]) / det, (p2[1] - p0[1]) / det, (p0[1] - p1[1]) / det};
      const double gy[3] = {(p2[0] - p1[0]) / det, (p0[0] - p2[0]) / det, (p1[0] - p0[0]) / det};
      for (int a = 0; a < 3; a++)
      {
        for (int b = 0; b < 3; b++)
        {
          kt.emplace_back(e[a], e[b], area * (gx[a] * gx[b] + gy[a] * gy[b]));
          mt.emplace_back(e[a], e[b], area / 12.0 * (a == b ? 2.0 : 1.0));
        }
      }
    }
  }
  ops.stiffness.resize(n, n);
  ops.stiffness.setFromTriplets(kt.begin(), kt.end());
  ops.mass.resize(n, n);
  ops.mass.setFromTriplets(mt.begin(), mt.end());
  ops.lumped_mass = ops.mass * Eigen::VectorXd::Ones(n);
  return ops;
}

double GradNormSq(const DiscreteOperators &ops, const Field &u)
{
  return u.dot(ops.stiffness * u);
}

double L2NormSq(const DiscreteOperators &ops, const Field &u)
{
  return u.dot(ops.mass * u);
}

namespace
{

// Calls visit(element, shape values, weight * |element|, u at the point) for every point.
template <typename Visit>
void ForEachQuadraturePoint(const DiscreteOperators &ops, const Field &u, Visit &&visit)
{
  const Mesh &mesh = ops.mesh;
  if (mesh.dimension == 1)
  {
    const auto &rule = ops.segment_rule;
    for (const auto &e : mesh.elements)
    {
      const double h = mesh.nodes[e[1]][0] - mesh.nodes[e[0]][0];
      for (size_t q = 0; q < rule.x.size(); q++)
      {
        const double s = rule.x[q];
        const double phi[3] = {1.0 - s, s, 0.0};
        visit(e, phi, rule.w[q] * h, phi[0] * u[e[0]] + phi[1] * u[e[1]]);
      }
    }
  }
  else
  {
    const auto &rule = ops.triangle_rule;
    for (const auto &e : mesh.elements)
    {
      const auto &p0 = mesh.nodes[e[0]], &p1 = mesh.nodes[e[1]], &p2 = mesh.nodes[e[2]];
      const double jac =
          std::abs((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
      for (size_t q = 0; q < rule.x.size(); q++)
      {
        const double s = rule.x[q][0], t = rule.x[q][1];
        const double phi[3] = {1.0 - s - t, s, t};
        visit(e, phi, rule.w[q] * jac, phi[0] * u[e[0]] + phi[1] * u[e[1]] + phi[2] * u[e[2]]);
      }
    }
  }
}

}  // namespace

double LkNormPow(const DiscreteOperators &ops, const Field &u, double k_exp)
{
  double sum = 0.0;
  ForEachQuadraturePoint(ops, u, [&](const auto &, const double *, double w, double uq) {
    sum += w * std::pow(std::abs(uq), k_exp);
  });
  return sum;
}

Field SourceVector(const DiscreteOperators &ops, const Field &u, double k_exp)
{
  Field f = ops.Zero();
  const int npe = ops.mesh.nodes_per_element;
  ForEachQuadraturePoint(ops, u, [&](const auto &e, const double *phi, double w, double uq) {
    const double s = w * std::pow(std::abs(uq), k_exp - 2.0) * uq;
    for (int a = 0; a < npe; a++)
    {
      f[e[a]] += s * phi[a];
    }
  });
  ops.Pin(f);
  return f;
}

double TraceNormSq(const DiscreteOperators &ops, const Field &u)
{
  return BoundaryQuadratic(ops, ops.Trace(u), 1.0);
}

double BoundaryQuadratic(const DiscreteOperators &ops, const BoundaryField &y, double weight)
{
  double sum = 0.0;
  for (int i = 0; i < ops.NumGamma1(); i++)
  {
    sum += ops.mesh.gamma1_weights[i] * y[i] * y[i];
  }
  return weight * sum;
}

void WriteCoordinateList(std::ostream &os, const SparseMatrix &m)
{
  os.precision(17);
  for (int k = 0; k < m.outerSize(); k++)
  {
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
    {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace kwave

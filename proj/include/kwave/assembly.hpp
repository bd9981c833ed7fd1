// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_ASSEMBLY_HPP
#define KWAVE_ASSEMBLY_HPP

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <iosfwd>

#include "kwave/geometry.hpp"
#include "kwave/quadrature.hpp"

namespace kwave
{

// One value per mesh node; Dirichlet entries are zero.
using Field = Eigen::VectorXd;
// One value per acoustic boundary node, ordered like Mesh::gamma1_nodes.
using BoundaryField = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct PhysicalParams
{
  double a = 1.0;
  double b = 1.0;
  double kappa = 1.0;  // Kirchhoff exponent
  double k_exp = 4.0;  // source exponent
  double p = 1.0;      // acoustic damping coefficient on Gamma1
  double q = 1.0;      // acoustic stiffness coefficient on Gamma1
  bool source = true;  // |u|^{k-2} u on or off

  bool operator==(const PhysicalParams &) const = default;
};

// Throws Error(Validation) listing every violated constraint.
void ValidateParams(const PhysicalParams &params, int dimension);

// Gauss points per direction so that |u|^k of a P1 field is integrated exactly when k is
// an even integer.
int QuadraturePointsFor(double k_exp);

struct DiscreteOperators
{
  Mesh mesh;
  SparseMatrix stiffness;       // unconstrained K
  SparseMatrix mass;            // consistent M
  Eigen::VectorXd lumped_mass;  // row sums of M
  int quad_points = 0;
  Rule1D segment_rule;
  RuleTriangle triangle_rule;

  int NumNodes() const { return mesh.NumNodes(); }
  int NumGamma1() const { return static_cast<int>(mesh.gamma1_nodes.size()); }

  // Zero the Dirichlet entries of f in place.
  void Pin(Field &f) const;
  Field Zero() const { return Field::Zero(NumNodes()); }
  // K u with Dirichlet rows zeroed.
  Field ApplyStiffness(const Field &u) const;
  // Restriction to / extension from the acoustic boundary nodes.
  BoundaryField Trace(const Field &u) const;
  Field ExtendBoundary(const BoundaryField &y) const;
};

DiscreteOperators Assemble(const Mesh &mesh, const PhysicalParams &params);
DiscreteOperators Assemble(const Mesh &mesh, int quad_points);

// ||grad u||_2^2 = u^T K u.
double GradNormSq(const DiscreteOperators &ops, const Field &u);
// ||u||_2^2 = u^T M u.
double L2NormSq(const DiscreteOperators &ops, const Field &u);
// int |u_h|^k by element quadrature.
double LkNormPow(const DiscreteOperators &ops, const Field &u, double k_exp);
// Entries int |u_h|^{k-2} u_h phi_i, Dirichlet entries zero.
Field SourceVector(const DiscreteOperators &ops, const Field &u, double k_exp);
// ||u||_{2,Gamma1}^2 with the lumped boundary measure.
double TraceNormSq(const DiscreteOperators &ops, const Field &u);
// weight * sum_i w_i y_i^2.
double BoundaryQuadratic(const DiscreteOperators &ops, const BoundaryField &y, double weight);

// Coordinate-list dump "row col value", one entry per line, 0-based.
void WriteCoordinateList(std::ostream &os, const SparseMatrix &m);

}  // namespace kwave

#endif  // KWAVE_ASSEMBLY_HPP

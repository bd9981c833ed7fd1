// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_GEOMETRY_HPP
#define KWAVE_GEOMETRY_HPP

#include <array>
#include <string>
#include <vector>

namespace kwave
{

// Sides of the interval (Left, Right) or of the rectangle (all four).
enum class Face
{
  Left,    // x = 0
  Right,   // x = Lx
  Bottom,  // y = 0
  Top,     // y = Ly
};

std::string ToString(Face f);
Face FaceFromString(const std::string &name);

//
// Interval [0, L] or rectangle [0, Lx] x [0, Ly]. Faces listed in gamma1_faces carry the
// acoustic condition, every other face is Dirichlet.
//
struct DomainSpec
{
  int dimension = 1;
  std::array<double, 2> extent{1.0, 1.0};
  std::array<int, 2> resolution{64, 64};
  std::vector<Face> gamma1_faces{Face::Right};

  bool operator==(const DomainSpec &) const = default;
};

using Point = std::array<double, 2>;

struct Mesh
{
  int dimension = 1;
  DomainSpec spec;
  std::vector<Point> nodes;
  // Segments use the first two entries; triangles use all three.
  std::vector<std::array<int, 3>> elements;
  int nodes_per_element = 2;

  std::vector<int> free_nodes;
  std::vector<int> dirichlet_nodes;
  std::vector<char> is_dirichlet;  // per node

  // Acoustic boundary nodes (a subset of free_nodes) and their lumped boundary measure.
  std::vector<int> gamma1_nodes;
  std::vector<double> gamma1_weights;

  // Smallest element edge length along an axis.
  double h = 0.0;

  int NumNodes() const { return static_cast<int>(nodes.size()); }
  int NumElements() const { return static_cast<int>(elements.size()); }
  double Gamma1Measure() const;
};

// Uniform segment (1D) or right-triangle (2D) mesh with deterministic node ordering:
// node (i, j) has index j * (nx + 1) + i.
Mesh BuildMesh(const DomainSpec &spec);

// Throws Error(Validation) describing every violated constraint.
void ValidateDomain(const DomainSpec &spec);

}  // namespace kwave

#endif  // KWAVE_GEOMETRY_HPP

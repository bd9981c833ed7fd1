// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "kwave/error.hpp"

namespace kwave
{

std::string ToString(Face f)
{
  switch (f)
  {
    case Face::Left:
      return "left";
    case Face::Right:
      return "right";
    case Face::Bottom:
      return "bottom";
    case Face::Top:
      return "top";
  }
  return "?";
}

Face FaceFromString(const std::string &name)
{
  if (name == "left")
  {
    return Face::Left;
  }
  if (name == "right")
  {
    return Face::Right;
  }
  if (name == "bottom")
  {
    return Face::Bottom;
  }
  if (name == "top")
  {
    return Face::Top;
  }
  throw Error(ErrorCode::Validation, "unknown boundary face '" + name + "'");
}

double Mesh::Gamma1Measure() const
{
  return std::accumulate(gamma1_weights.begin(), gamma1_weights.end(), 0.0);
}

void ValidateDomain(const DomainSpec &spec)
{
  std::vector<std::string> errors;
  if (spec.dimension != 1 && spec.dimension != 2)
  {
    errors.push_back("domain.dimension must be 1 or 2");
  }
  const int dim = std::clamp(spec.dimension, 1, 2);
  for (int d = 0; d < dim; d++)
  {
    if (!(spec.extent[d] > 0.0))
    {
      errors.push_back("domain.extent must be positive");
    }
    if (spec.resolution[d] < 2)
    {
      errors.push_back("domain.resolution must be at least 2 elements per axis");
    }
  }
  const std::vector<Face> all =
      dim == 1 ? std::vector<Face>{Face::Left, Face::Right}
               : std::vector<Face>{Face::Left, Face::Right, Face::Bottom, Face::Top};
  for (Face f : spec.gamma1_faces)
  {
    if (std::find(all.begin(), all.end(), f) == all.end())
    {
      errors.push_back("domain.gamma1_faces: face '" + ToString(f) +
                       "' does not exist in dimension " + std::to_string(dim));
    }
  }
  const bool gamma0_empty = std::all_of(all.begin(), all.end(), [&](Face f) {
    return std::find(spec.gamma1_faces.begin(), spec.gamma1_faces.end(), f) !=
           spec.gamma1_faces.end();
  });
  if (gamma0_empty)
  {
    errors.push_back("domain.gamma1_faces leaves the Dirichlet part Gamma0 empty");
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

namespace
{

bool HasFace(const DomainSpec &spec, Face f)
{
  return std::find(spec.gamma1_faces.begin(), spec.gamma1_faces.end(), f) !=
         spec.gamma1_faces.end();
}

void Classify(Mesh &mesh)
{
  for (int i = 0; i < mesh.NumNodes(); i++)
  {
    (mesh.is_dirichlet[i] ? mesh.dirichlet_nodes : mesh.free_nodes).push_back(i);
  }
}

Mesh Build1D(const DomainSpec &spec)
{
  Mesh mesh;
  mesh.dimension = 1;
  mesh.spec = spec;
  mesh.nodes_per_element = 2;
  const int n = spec.resolution[0];
  const double L = spec.extent[0];
  mesh.h = L / n;
  for (int i = 0; i <= n; i++)
  {
    // Exact endpoints regardless of rounding in i * h.
    mesh.nodes.push_back({i == n ? L : i * mesh.h, 0.0});
  }
  for (int e = 0; e < n; e++)
  {
    mesh.elements.push_back({e, e + 1, -1});
  }
  mesh.is_dirichlet.assign(n + 1, 0);
  mesh.is_dirichlet[0] = HasFace(spec, Face::Left) ? 0 : 1;
  mesh.is_dirichlet[n] = HasFace(spec, Face::Right) ? 0 : 1;
  Classify(mesh);
  // A point "integral" over an endpoint has unit weight.
  if (HasFace(spec, Face::Left))
  {
    mesh.gamma1_nodes.push_back(0);
    mesh.gamma1_weights.push_back(1.0);
  }
  if (HasFace(spec, Face::Right))
  {
    mesh.gamma1_nodes.push_back(n);
    mesh.gamma1_weights.push_back(1.0);
  }
  return mesh;
}

Mesh Build2D(const DomainSpec &spec)
{
  Mesh mesh;
  mesh.dimension = 2;
  mesh.spec = spec;
  mesh.nodes_per_element = 3;
  const int nx = spec.resolution[0], ny = spec.resolution[1];
  const double Lx = spec.extent[0], Ly = spec.extent[1];
  const double hx = Lx / nx, hy = Ly / ny;
  mesh.h = std::min(hx, hy);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; j++)
  {
    for (int i = 0; i <= nx; i++)
    {
      mesh.nodes.push_back({i == nx ? Lx : i * hx, j == ny ? Ly : j * hy});
    }
  }
  for (int j = 0; j < ny; j++)
  {
    for (int i = 0; i < nx; i++)
    {
      const int n00 = id(i, j), n10 = id(i + 1, j), n11 = id(i + 1, j + 1),
                n01 = id(i, j + 1);
      mesh.elements.push_back({n00, n10, n11});
      mesh.elements.push_back({n00, n11, n01});
    }
  }

  // Faces as ordered node lists.
  auto face_nodes = [&](Face f) {
    std::vector<int> out;
    switch (f)
    {
      case Face::Left:
        for (int j = 0; j <= ny; j++) out.push_back(id(0, j));
        break;
      case Face::Right:
        for (int j = 0; j <= ny; j++) out.push_back(id(nx, j));
        break;
      case Face::Bottom:
        for (int i = 0; i <= nx; i++) out.push_back(id(i, 0));
        break;
      case Face::Top:
        for (int i = 0; i <= nx; i++) out.push_back(id(i, ny));
        break;
    }
    return out;
  };

  // Gamma0 is closed: corners shared with a Dirichlet side are Dirichlet.
  mesh.is_dirichlet.assign(mesh.nodes.size(), 0);
  for (Face f : {Face::Left, Face::Right, Face::Bottom, Face::Top})
  {
    if (!HasFace(spec, f))
    {
      for (int n : face_nodes(f))
      {
        mesh.is_dirichlet[n] = 1;
      }
    }
  }
  Classify(mesh);

  // Lumped boundary measure. Each edge gives half its length to each endpoint; the share
  // of a Dirichlet endpoint moves to the free endpoint so the weights sum to |Gamma1|.
  std::map<int, double> weight;
  for (Face f : {Face::Left, Face::Right, Face::Bottom, Face::Top})
  {
    if (!HasFace(spec, f))
    {
      continue;
    }
    const auto fn = face_nodes(f);
    for (size_t e = 0; e + 1 < fn.size(); e++)
    {
      const int a = fn[e], b = fn[e + 1];
      const double len = std::hypot(mesh.nodes[b][0] - mesh.nodes[a][0],
                                    mesh.nodes[b][1] - mesh.nodes[a][1]);
      const bool da = mesh.is_dirichlet[a], db = mesh.is_dirichlet[b];
      if (!da && !db)
      {
        weight[a] += 0.5 * len;
        weight[b] += 0.5 * len;
      }
      else if (da && !db)
      {
        weight[b] += len;
      }
      else if (!da && db)
      {
        weight[a] += len;
      }
    }
  }
  for (const auto &[node, w] : weight)
  {
    mesh.gamma1_nodes.push_back(node);
    mesh.gamma1_weights.push_back(w);
  }
  return mesh;
}

}  // namespace

Mesh BuildMesh(const DomainSpec &spec)
{
  ValidateDomain(spec);
  DomainSpec s = spec;
  std::sort(s.gamma1_faces.begin(), s.gamma1_faces.end());
  s.gamma1_faces.erase(std::unique(s.gamma1_faces.begin(), s.gamma1_faces.end()),
                       s.gamma1_faces.end());
  return s.dimension == 1 ? Build1D(s) : Build2D(s);
}

}  // namespace kwave

// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_HISTORY_HPP
#define KWAVE_HISTORY_HPP

#include <deque>
#include <string>
#include <vector>

#include "kwave/assembly.hpp"
#include "kwave/kernels.hpp"

namespace kwave
{

enum class StoragePolicy
{
  Full,
  Strided,    // keep every stride-th snapshot plus the latest
  Truncated,  // drop snapshots once g(t - s) < truncate_rel * g(0)
};

std::string ToString(StoragePolicy p);
StoragePolicy StoragePolicyFromString(const std::string &name);

struct StorageConfig
{
  StoragePolicy policy = StoragePolicy::Full;
  int stride = 1;
  double truncate_rel = 1e-8;

  bool operator==(const StorageConfig &) const = default;
};

enum class ConvolutionPath
{
  Auto,        // recursive when the kernel is a pure exponential
  Recursive,   // exact exponential recursion; requires a fast-path kernel
  Quadrature,  // composite trapezoid over the retained snapshots
};

//
// Solution history for the memory terms. Time stamps are strictly increasing and start at
// the first push. All queries are evaluated at the latest stamp.
//
class HistoryBuffer
{
public:
  HistoryBuffer(const RelaxationKernel &kernel, int num_nodes, const StorageConfig &storage = {},
                ConvolutionPath path = ConvolutionPath::Auto);

  // ku is the pinned stiffness product K u.
  void Push(double t, const Field &u, const Field &ku);

  bool Empty() const { return pushed_ == 0; }
  size_t Pushed() const { return pushed_; }
  size_t Retained() const { return snaps_.size(); }
  double LastTime() const;
  std::vector<double> Stamps() const;
  bool Recursive() const { return recursive_; }
  const RelaxationKernel &kernel() const { return kernel_; }

  // int_0^t g(t - s) K u(s) ds at t = LastTime().
  Field ConvolutionForce(double t) const;
  // (g diamond grad u)(t) and (g' diamond grad u)(t) for u(t) = u_now, ku_now = K u_now.
  double GDiamond(const Field &u_now, const Field &ku_now) const;
  double GPrimeDiamond(const Field &u_now, const Field &ku_now) const;

private:
  struct Snapshot
  {
    double t;
    Field u;
    Field ku;
    double uku;  // u^T K u
    bool on_stride;
  };

  // sum_j w_j f(t - s_j) (A - 2 u.Ku_j + c_j) over retained snapshots.
  template <typename KernelFn>
  double DiamondSum(const Field &u_now, double uku_now, KernelFn &&fn) const;

  RelaxationKernel kernel_;
  int num_nodes_;
  StorageConfig storage_;
  bool recursive_;
  size_t pushed_ = 0;
  double first_time_ = 0.0;
  std::deque<Snapshot> snaps_;

  // Exponential recursion state: I = int e^{-alpha (t-s)} K u(s) ds, C likewise for u.Ku.
  Field acc_force_;
  double acc_energy_ = 0.0;
};

// Weights of the exact integral int_0^dt e^{-alpha (dt - s)} f(s) ds for f linear on
// [0, dt], as (weight of f(0), weight of f(dt)).
std::pair<double, double> ExponentialStepWeights(double alpha, double dt);

}  // namespace kwave

#endif  // KWAVE_HISTORY_HPP

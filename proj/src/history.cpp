// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#include "kwave/history.hpp"

#include <algorithm>
#include <cmath>

#include "kwave/error.hpp"

namespace kwave
{

std::string ToString(StoragePolicy p)
{
  switch (p)
  {
    case StoragePolicy::Full:
      return "full";
    case StoragePolicy::Strided:
      return "strided";
    case StoragePolicy::Truncated:
      return "truncated";
  }
  return "?";
}

StoragePolicy StoragePolicyFromString(const std::string &name)
{
  if (name == "full")
  {
    return StoragePolicy::Full;
  }
  if (name == "strided")
  {
    return StoragePolicy::Strided;
  }
  if (name == "truncated")
  {
    return StoragePolicy::Truncated;
  }
  throw Error(ErrorCode::Validation, "unknown storage policy '" + name + "'");
}

std::pair<double, double> ExponentialStepWeights(double alpha, double dt)
{
  const double beta = alpha * dt;
  // m = 1 - e^{-beta} (1 + beta), by series when beta is small.
  double m;
  if (beta < 1e-3)
  {
    m = beta * beta * (0.5 - beta * (1.0 / 3.0 - beta * (1.0 / 8.0 - beta / 30.0)));
  }
  else
  {
    m = -std::expm1(-beta) - beta * std::exp(-beta);
  }
  const double total = -std::expm1(-beta) / alpha;
  const double w0 = m / (alpha * alpha * dt);
  return {w0, total - w0};
}

HistoryBuffer::HistoryBuffer(const RelaxationKernel &kernel, int num_nodes,
                             const StorageConfig &storage, ConvolutionPath path)
    : kernel_(kernel), num_nodes_(num_nodes), storage_(storage)
{
  Require(num_nodes > 0, ErrorCode::InvalidArgument, "history needs a positive node count");
  Require(storage.stride >= 1, ErrorCode::Validation, "stepping.stride must be at least 1");
  Require(storage.truncate_rel > 0.0 && storage.truncate_rel < 1.0, ErrorCode::Validation,
          "stepping.truncate_rel must lie in (0, 1)");
  switch (path)
  {
    case ConvolutionPath::Auto:
      recursive_ = kernel.FastPath();
      break;
    case ConvolutionPath::Recursive:
      Require(kernel.FastPath(), ErrorCode::InvalidArgument,
              "recursive convolution needs an exponential kernel");
      recursive_ = true;
      break;
    case ConvolutionPath::Quadrature:
      recursive_ = false;
      break;
  }
  acc_force_ = Field::Zero(num_nodes);
}

double HistoryBuffer::LastTime() const
{
  Require(!snaps_.empty(), ErrorCode::InvalidArgument, "history is empty");
  return snaps_.back().t;
}

std::vector<double> HistoryBuffer::Stamps() const
{
  std::vector<double> out;
  out.reserve(snaps_.size());
  for (const auto &s : snaps_)
  {
    out.push_back(s.t);
  }
  return out;
}

void HistoryBuffer::Push(double t, const Field &u, const Field &ku)
{
  Require(u.size() == num_nodes_ && ku.size() == num_nodes_, ErrorCode::InvalidArgument,
          "history field size mismatch");
  if (!snaps_.empty())
  {
    Require(t > snaps_.back().t, ErrorCode::InvalidArgument,
            "history time stamps must be strictly increasing");
  }
  const double uku = u.dot(ku);
  if (pushed_ == 0)
  {
    first_time_ = t;
  }

  if (recursive_)
  {
    if (!snaps_.empty() && !kernel_.IsZero())
    {
      const Snapshot &prev = snaps_.back();
      const double alpha = kernel_.rate().alpha();
      const double dt = t - prev.t;
      const auto [w0, w1] = ExponentialStepWeights(alpha, dt);
      const double decay = std::exp(-alpha * dt);
      acc_force_ = decay * acc_force_ + w0 * prev.ku + w1 * ku;
      acc_energy_ = decay * acc_energy_ + w0 * prev.uku + w1 * uku;
    }
    // Only the latest snapshot is needed by the recursion.
    snaps_.clear();
    snaps_.push_back({t, u, ku, uku, true});
    pushed_++;
    return;
  }

  const bool on_stride = storage_.policy != StoragePolicy::Strided ||
                         pushed_ % static_cast<size_t>(storage_.stride) == 0;
  if (!snaps_.empty() && !snaps_.back().on_stride)
  {
    snaps_.pop_back();
  }
  snaps_.push_back({t, u, ku, uku, on_stride});
  pushed_++;

  if (storage_.policy == StoragePolicy::Truncated && !kernel_.IsZero())
  {
    const double threshold = storage_.truncate_rel * kernel_.g0();
    while (snaps_.size() > 2 && kernel_.G(t - snaps_[1].t) < threshold)
    {
      snaps_.pop_front();
    }
  }
}

namespace
{

// Composite trapezoid weight of node j on the (possibly nonuniform) retained grid.
template <typename Deque>
double TrapezoidWeight(const Deque &s, size_t j)
{
  const size_t n = s.size();
  if (n < 2)
  {
    return 0.0;
  }
  const double left = j > 0 ? s[j].t - s[j - 1].t : 0.0;
  const double right = j + 1 < n ? s[j + 1].t - s[j].t : 0.0;
  return 0.5 * (left + right);
}

}  // namespace

Field HistoryBuffer::ConvolutionForce(double t) const
{
  Field f = Field::Zero(num_nodes_);
  if (snaps_.empty() || kernel_.IsZero())
  {
    return f;
  }
  Require(std::abs(t - snaps_.back().t) <= 1e-12 * std::max(1.0, std::abs(t)),
          ErrorCode::InvalidArgument, "history does not end at the requested time");
  if (recursive_)
  {
    return kernel_.g0() * acc_force_;
  }
  const double now = snaps_.back().t;
  for (size_t j = 0; j < snaps_.size(); j++)
  {
    const double w = TrapezoidWeight(snaps_, j);
    if (w != 0.0)
    {
      f.noalias() += (w * kernel_.G(now - snaps_[j].t)) * snaps_[j].ku;
    }
  }
  return f;
}

template <typename KernelFn>
double HistoryBuffer::DiamondSum(const Field &u_now, double uku_now, KernelFn &&fn) const
{
  const double now = snaps_.back().t;
  double sum = 0.0;
  for (size_t j = 0; j < snaps_.size(); j++)
  {
    const double w = TrapezoidWeight(snaps_, j);
    if (w == 0.0)
    {
      continue;
    }
    const Snapshot &s = snaps_[j];
    sum += w * fn(now - s.t) * (uku_now - 2.0 * u_now.dot(s.ku) + s.uku);
  }
  return sum;
}

double HistoryBuffer::GDiamond(const Field &u_now, const Field &ku_now) const
{
  if (snaps_.empty() || kernel_.IsZero())
  {
    return 0.0;
  }
  const double uku_now = u_now.dot(ku_now);
  double value;
  if (recursive_)
  {
    const double t = snaps_.back().t - first_time_;
    value = uku_now * kernel_.Integral(t) - 2.0 * kernel_.g0() * u_now.dot(acc_force_) +
            kernel_.g0() * acc_energy_;
  }
  else
  {
    value = DiamondSum(u_now, uku_now, [this](double tau) { return kernel_.G(tau); });
  }
  // The expanded quadratic form can round slightly below zero.
  return std::max(value, 0.0);
}

double HistoryBuffer::GPrimeDiamond(const Field &u_now, const Field &ku_now) const
{
  if (snaps_.empty() || kernel_.IsZero())
  {
    return 0.0;
  }
  if (recursive_)
  {
    return -kernel_.rate().alpha() * GDiamond(u_now, ku_now);
  }
  const double value = DiamondSum(u_now, u_now.dot(ku_now),
                                  [this](double tau) { return kernel_.GPrime(tau); });
  return std::min(value, 0.0);
}

}  // namespace kwave

// Copyright 2026 The kwave Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef KWAVE_ERROR_HPP
#define KWAVE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace kwave
{

// Error categories. The numeric values are mirrored by kwave_status in the C API.
enum class ErrorCode
{
  InvalidArgument = 1,
  Parse = 2,
  Validation = 3,
  Hypothesis = 4,
  Cfl = 5,
  Blowup = 6,
  Io = 7,
  Optimizer = 8,
  Internal = 9,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline void Require(bool cond, ErrorCode code, const std::string &msg)
{
  if (!cond)
  {
    throw Error(code, msg);
  }
}

}  // namespace kwave

#endif  // KWAVE_ERROR_HPP

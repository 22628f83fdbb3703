//------------------------------------------------------------------------------
//
//   Copyright 2026 The embscope Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace embscope {

using PointId = std::uint32_t;
using FrameId = std::uint32_t;

enum class ErrorKind
{
  kInvalidArgument,
  kNotFound,
  kConflict,
  kIo,
  kFormat,
  kDegenerate,
};

/// Exception carried through the core; the C API maps `kind()` onto status codes
/// and the service maps it onto HTTP statuses.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, std::string const &message)
    : std::runtime_error(message)
    , kind_(kind)
  {}

  ErrorKind kind() const noexcept
  {
    return kind_;
  }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, std::string const &message)
{
  throw Error(kind, message);
}

inline void Require(bool condition, std::string const &message)
{
  if (!condition)
  {
    Fail(ErrorKind::kInvalidArgument, message);
  }
}

}  // namespace embscope

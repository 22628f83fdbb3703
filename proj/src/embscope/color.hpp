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

#include <array>
#include <string>

namespace embscope {

struct Lab
{
  double l = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Gamma-encoded sRGB, each channel in [0,1].
using Rgb = std::array<double, 3>;

/// CIELAB (D65 white) -> sRGB, clamping out-of-gamut channels to [0,1].
Rgb LabToSrgb(Lab const &lab);

/// "#RRGGBB".
std::string RgbToHex(Rgb const &rgb);

}  // namespace embscope

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

#include "embscope/color.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace embscope {
namespace {

constexpr double kWhiteX = 0.95047;
constexpr double kWhiteY = 1.00000;
constexpr double kWhiteZ = 1.08883;
constexpr double kDelta  = 6.0 / 29.0;

double LabInverse(double t)
{
  return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

double Encode(double linear)
{
  linear = std::clamp(linear, 0.0, 1.0);
  double const c = linear <= 0.0031308 ? 12.92 * linear : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
  return std::clamp(c, 0.0, 1.0);
}

}  // namespace

Rgb LabToSrgb(Lab const &lab)
{
  double const fy = (lab.l + 16.0) / 116.0;
  double const fx = fy + lab.a / 500.0;
  double const fz = fy - lab.b / 200.0;
  double const x  = kWhiteX * LabInverse(fx);
  double const y  = kWhiteY * LabInverse(fy);
  double const z  = kWhiteZ * LabInverse(fz);

  double const r = 3.2404542 * x - 1.5371385 * y - 0.4985314 * z;
  double const g = -0.9692660 * x + 1.8760108 * y + 0.0415560 * z;
  double const b = 0.0556434 * x - 0.2040259 * y + 1.0572252 * z;
  return {Encode(r), Encode(g), Encode(b)};
}

std::string RgbToHex(Rgb const &rgb)
{
  char buf[8];
  auto channel = [](double v) { return static_cast<unsigned>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)); };
  std::snprintf(buf, sizeof buf, "#%02X%02X%02X", channel(rgb[0]), channel(rgb[1]), channel(rgb[2]));
  return buf;
}

}  // namespace embscope

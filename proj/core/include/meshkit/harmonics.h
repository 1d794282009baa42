// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Real spherical-harmonic basis and continuous filters built on it.
//
// Basis layout for degree L has T = (L + 1)^2 entries. Degree l occupies the
// index range [l^2, (l + 1)^2) as
//
//   l^2             zonal   Y_l^0(theta)
//   l^2 + m         cosine  Y_l^m(theta, 0) cos(m phi),   m = 1..l
//   l^2 + l + m     sine    Y_l^m(theta, 0) sin(m phi),   m = 1..l
//
// Y_l^m carries the usual sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) prefactor and the
// associated Legendre functions omit the Condon-Shortley phase. No extra
// sqrt(2) is applied to the m > 0 terms, so their squared norm over the
// sphere is 1/2.

#pragma once

#include "meshkit/common.h"

#include <span>

namespace meshkit {

/// (degree + 1)^2; throws ArgumentError for a negative degree.
int basis_size(int degree);

inline int zonal_index(int l) { return l * l; }
inline int cosine_index(int l, int m) { return l * l + m; }
inline int sine_index(int l, int m) { return l * l + l + m; }

/// P_l^m(x) without the (-1)^m phase, 0 <= m <= l, |x| <= 1.
double assoc_legendre(int l, int m, double x);

/// Writes the T basis values at (theta, phi) into `out` (size T).
void real_sh_basis(int degree, double theta, double phi, std::span<double> out);
RowVector real_sh_basis(int degree, double theta, double phi);

struct SphericalAngles {
  double theta = 0.0;  // polar, [0, pi]
  double phi = 0.0;    // azimuth, [0, 2 pi)
};

/// theta = acos(z), phi = atan2(y, x) wrapped to [0, 2 pi); phi = 0 at the
/// poles. Inputs with norm in [0.5, 2] are normalized (with a warning when
/// the norm is off by more than 1e-6); anything else is an ArgumentError.
SphericalAngles direction_to_angles(const Vec3& direction);

/// Projects a barycentric triple onto the first octant of the unit sphere.
SphericalAngles barycentric_to_angles(const Vec3& barycentric);

/// Rows are real_sh_basis evaluated at each angle pair.
Matrix basis_matrix(int degree, std::span<const SphericalAngles> angles);

/// Truncated harmonic expansion F(theta, phi) with one coefficient column per
/// channel. The radial variant adds a constant `radial_constant` reached at
/// r = 0 and blends linearly to F(theta, phi) at r = radius.
struct HarmonicFilter {
  int degree = 0;
  Matrix coefficients;        // T x C
  RowVector radial_constant;  // empty, or 1 x C
  double radius = 1.0;

  static HarmonicFilter zeros(int degree, int channels);
  static HarmonicFilter radial_zeros(int degree, int channels, double radius);

  int channels() const { return static_cast<int>(coefficients.cols()); }
  bool radial() const { return radial_constant.size() > 0; }
  /// Throws ArgumentError on shape inconsistencies.
  void validate() const;
};

/// F(theta, phi) per channel.
RowVector eval_filter(const HarmonicFilter& filter, double theta, double phi);

/// F(theta, phi, r) = F(theta, phi) r / radius + c0 (1 - r / radius).
/// r beyond the radius is clamped and reported through `clamped`.
RowVector eval_radial_filter(const HarmonicFilter& filter, double theta,
                             double phi, double r, bool* clamped = nullptr);

}  // namespace meshkit

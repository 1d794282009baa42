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

#include "meshkit/harmonics.h"

#include "meshkit/parallel.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace meshkit {
namespace {

// sqrt((2l+1)/(4 pi) * (l-m)!/(l+m)!)
double normalization(int l, int m) {
  double ratio = 1.0;
  for (int k = l - m + 1; k <= l + m; ++k) ratio /= k;
  return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * ratio);
}

// Fills p[l * (L + 1) + m] = P_l^m(x) for 0 <= m <= l <= L. The diagonal is
// seeded with (2m - 1)!! s^m and each column is raised in l by the standard
// three-term recurrence.
void legendre_table(int degree, double x, std::vector<double>& p) {
  const int stride = degree + 1;
  p.assign(static_cast<std::size_t>(stride * stride), 0.0);
  const double s = std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x)));
  double diag = 1.0;
  for (int m = 0; m <= degree; ++m) {
    if (m > 0) diag *= (2.0 * m - 1.0) * s;
    p[m * stride + m] = diag;
    if (m + 1 <= degree) p[(m + 1) * stride + m] = x * (2.0 * m + 1.0) * diag;
    for (int l = m + 2; l <= degree; ++l) {
      p[l * stride + m] = ((2.0 * l - 1.0) * x * p[(l - 1) * stride + m] -
                           (l + m - 1.0) * p[(l - 2) * stride + m]) /
                          (l - m);
    }
  }
}

}  // namespace

int basis_size(int degree) {
  if (degree < 0) throw ArgumentError("harmonic degree must be >= 0");
  return (degree + 1) * (degree + 1);
}

double assoc_legendre(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l) {
    throw ArgumentError("assoc_legendre: require 0 <= m <= l");
  }
  if (!(std::abs(x) <= 1.0)) {
    throw ArgumentError("assoc_legendre: |x| must be <= 1");
  }
  std::vector<double> p;
  legendre_table(l, x, p);
  return p[static_cast<std::size_t>(l * (l + 1) + m)];
}

void real_sh_basis(int degree, double theta, double phi,
                   std::span<double> out) {
  const int t = basis_size(degree);
  if (static_cast<int>(out.size()) != t) {
    throw ArgumentError("real_sh_basis: output span has wrong size");
  }
  thread_local std::vector<double> p;
  legendre_table(degree, std::cos(theta), p);
  const int stride = degree + 1;
  for (int l = 0; l <= degree; ++l) {
    out[zonal_index(l)] = normalization(l, 0) * p[l * stride];
    for (int m = 1; m <= l; ++m) {
      const double y = normalization(l, m) * p[l * stride + m];
      out[cosine_index(l, m)] = y * std::cos(m * phi);
      out[sine_index(l, m)] = y * std::sin(m * phi);
    }
  }
}

RowVector real_sh_basis(int degree, double theta, double phi) {
  RowVector out(basis_size(degree));
  real_sh_basis(degree, theta, phi, std::span<double>(out.data(), out.size()));
  return out;
}

SphericalAngles direction_to_angles(const Vec3& direction) {
  const double norm = direction.norm();
  Vec3 d = direction;
  if (std::abs(norm - 1.0) > 1e-6) {
    if (!(norm >= 0.5 && norm <= 2.0)) {
      std::ostringstream msg;
      msg << "direction_to_angles: direction norm " << norm
          << " is not close to 1";
      throw ArgumentError(msg.str());
    }
    log_warning("direction_to_angles: normalizing non-unit direction");
    d /= norm;
  }
  SphericalAngles a;
  a.theta = std::acos(std::clamp(d.z(), -1.0, 1.0));
  if (std::abs(d.z()) >= 1.0 || (d.x() == 0.0 && d.y() == 0.0)) {
    a.phi = 0.0;
  } else {
    double phi = std::atan2(d.y(), d.x());
    if (phi < 0.0) phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi) phi = 0.0;
    a.phi = phi;
  }
  return a;
}

SphericalAngles barycentric_to_angles(const Vec3& barycentric) {
  const double norm = barycentric.norm();
  if (!(norm > 0.0)) {
    throw ArgumentError("barycentric_to_angles: zero barycentric triple");
  }
  return direction_to_angles(barycentric / norm);
}

Matrix basis_matrix(int degree, std::span<const SphericalAngles> angles) {
  Matrix out(static_cast<Eigen::Index>(angles.size()), basis_size(degree));
  parallel_for(angles.size(), [&](std::size_t i) {
    auto row = out.row(static_cast<Eigen::Index>(i));
    real_sh_basis(degree, angles[i].theta, angles[i].phi,
                  std::span<double>(row.data(), row.size()));
  });
  return out;
}

HarmonicFilter HarmonicFilter::zeros(int degree, int channels) {
  if (channels < 1) throw ArgumentError("filter needs at least one channel");
  HarmonicFilter f;
  f.degree = degree;
  f.coefficients = Matrix::Zero(basis_size(degree), channels);
  return f;
}

HarmonicFilter HarmonicFilter::radial_zeros(int degree, int channels,
                                            double radius) {
  HarmonicFilter f = zeros(degree, channels);
  f.radial_constant = RowVector::Zero(channels);
  f.radius = radius;
  f.validate();
  return f;
}

void HarmonicFilter::validate() const {
  if (coefficients.rows() != basis_size(degree)) {
    throw ArgumentError("filter coefficient rows must equal (L+1)^2");
  }
  if (coefficients.cols() < 1) throw ArgumentError("filter has no channels");
  if (radial()) {
    if (radial_constant.size() != coefficients.cols()) {
      throw ArgumentError("radial constant length must equal channel count");
    }
    if (!(radius > 0.0)) throw ArgumentError("filter radius must be > 0");
  }
}

RowVector eval_filter(const HarmonicFilter& filter, double theta, double phi) {
  filter.validate();
  return real_sh_basis(filter.degree, theta, phi) * filter.coefficients;
}

RowVector eval_radial_filter(const HarmonicFilter& filter, double theta,
                             double phi, double r, bool* clamped) {
  if (!filter.radial()) {
    throw ArgumentError("eval_radial_filter: filter has no radial constant");
  }
  if (r < 0.0) throw ArgumentError("eval_radial_filter: r must be >= 0");
  bool was_clamped = false;
  if (r > filter.radius) {
    r = filter.radius;
    was_clamped = true;
  }
  if (clamped != nullptr) *clamped = was_clamped;
  const double z = r / filter.radius;
  if (z == 0.0) return filter.radial_constant;
  return eval_filter(filter, theta, phi) * z +
         filter.radial_constant * (1.0 - z);
}

}  // namespace meshkit

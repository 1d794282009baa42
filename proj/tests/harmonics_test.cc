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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.h"

namespace meshkit {
namespace {

TEST(AssocLegendre, LowOrderValues) {
  for (double x : {-1.0, -0.3, 0.0, 0.7, 1.0}) {
    EXPECT_DOUBLE_EQ(assoc_legendre(0, 0, x), 1.0);
  }
  EXPECT_NEAR(assoc_legendre(1, 1, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(assoc_legendre(2, 1, 0.5), 3.0 * 0.5 * std::sqrt(0.75), 1e-12);
  EXPECT_NEAR(assoc_legendre(2, 1, 0.5), 1.29904, 1e-5);
}

TEST(AssocLegendre, MatchesPolynomialOracle) {
  for (int l = 0; l <= 8; ++l) {
    for (int m = 0; m <= l; ++m) {
      for (double x = -1.0; x <= 1.0; x += 0.125) {
        const double want = oracle::legendre(l, m, x);
        EXPECT_NEAR(assoc_legendre(l, m, x), want, 1e-10 * std::max(1.0, std::abs(want)))
            << l << " " << m << " " << x;
      }
    }
  }
}

TEST(AssocLegendre, RejectsBadArguments) {
  EXPECT_THROW(assoc_legendre(1, 2, 0.0), ArgumentError);
  EXPECT_THROW(assoc_legendre(2, -1, 0.0), ArgumentError);
  EXPECT_THROW(assoc_legendre(2, 1, 1.5), ArgumentError);
}

TEST(RealBasis, SizeIsSquareOfDegreePlusOne) {
  for (int l = 0; l <= 6; ++l) {
    EXPECT_EQ(basis_size(l), (l + 1) * (l + 1));
    EXPECT_EQ(real_sh_basis(l, 0.4, 1.1).size(), (l + 1) * (l + 1));
  }
  EXPECT_EQ(basis_size(3), 16);
  EXPECT_THROW(basis_size(-1), ArgumentError);
}

TEST(RealBasis, ZonalZeroIsConstant) {
  const double y00 = 1.0 / (2.0 * std::sqrt(kPi));
  EXPECT_NEAR(y00, 0.2820948, 1e-7);
  for (double th : {0.0, 0.3, 1.5, kPi}) {
    for (double ph : {0.0, 2.0, 5.0}) {
      EXPECT_NEAR(real_sh_basis(3, th, ph)(0), y00, 1e-15);
    }
  }
}

TEST(RealBasis, NorthPoleKillsNonZonalTerms) {
  const RowVector b = real_sh_basis(4, 0.0, 1.234);
  for (int l = 1; l <= 4; ++l) {
    for (int m = 1; m <= l; ++m) {
      EXPECT_EQ(b(cosine_index(l, m)), 0.0);
      EXPECT_EQ(b(sine_index(l, m)), 0.0);
    }
  }
}

TEST(RealBasis, MatchesTermwiseOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> th(0.0, kPi), ph(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const double t = th(rng), p = ph(rng);
    const RowVector got = real_sh_basis(5, t, p);
    const std::vector<double> want = oracle::sh_basis(5, t, p);
    for (std::size_t i = 0; i < want.size(); ++i) {
      EXPECT_NEAR(got(static_cast<Eigen::Index>(i)), want[i], 1e-12);
    }
  }
}

TEST(RealBasis, QuadratureGramIsDiagonal) {
  constexpr int kDegree = 4;
  const int t_size = basis_size(kDegree);
  std::vector<double> x, w;
  oracle::gauss_legendre(64, x, w);
  Matrix gram = Matrix::Zero(t_size, t_size);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double theta = std::acos(x[i]);
    for (int j = 0; j < 128; ++j) {
      const double phi = 2.0 * kPi * j / 128.0;
      const RowVector b = real_sh_basis(kDegree, theta, phi);
      gram.noalias() += (w[i] * 2.0 * kPi / 128.0) * b.transpose() * b;
    }
  }
  for (int l = 0; l <= kDegree; ++l) {
    EXPECT_NEAR(gram(zonal_index(l), zonal_index(l)), 1.0, 1e-10);
    for (int m = 1; m <= l; ++m) {
      EXPECT_NEAR(gram(cosine_index(l, m), cosine_index(l, m)), 0.5, 1e-10);
      EXPECT_NEAR(gram(sine_index(l, m), sine_index(l, m)), 0.5, 1e-10);
    }
  }
  for (int a = 0; a < t_size; ++a) {
    for (int b = 0; b < t_size; ++b) {
      if (a != b) {
        EXPECT_LT(std::abs(gram(a, b)), 1e-6) << a << "," << b;
      }
    }
  }
}

TEST(Angles, DirectionConvention) {
  auto check = [](const Vec3& d, double theta, double phi) {
    const SphericalAngles a = direction_to_angles(d);
    EXPECT_NEAR(a.theta, theta, 1e-12);
    EXPECT_NEAR(a.phi, phi, 1e-12);
  };
  check({0, 0, 1}, 0.0, 0.0);
  check({0, 0, -1}, kPi, 0.0);
  check({1, 0, 0}, kPi / 2, 0.0);
  check({0, -1, 0}, kPi / 2, 3 * kPi / 2);
  check({-1, 0, 0}, kPi / 2, kPi);
}

TEST(Angles, NormalizesNearUnitAndRejectsFarOff) {
  set_warnings_enabled(false);
  const SphericalAngles a = direction_to_angles({0, 1.5, 0});
  EXPECT_NEAR(a.theta, kPi / 2, 1e-12);
  EXPECT_NEAR(a.phi, kPi / 2, 1e-12);
  EXPECT_THROW(direction_to_angles({0, 0, 3}), ArgumentError);
  EXPECT_THROW(direction_to_angles({0, 0, 0}), ArgumentError);
  set_warnings_enabled(true);
}

TEST(Angles, BarycentricCornersHitAnchors) {
  const SphericalAngles a = barycentric_to_angles({1, 0, 0});
  const SphericalAngles b = barycentric_to_angles({0, 1, 0});
  const SphericalAngles c = barycentric_to_angles({0, 0, 1});
  EXPECT_EQ(a.theta, kPi / 2);
  EXPECT_EQ(a.phi, 0.0);
  EXPECT_EQ(b.theta, kPi / 2);
  EXPECT_EQ(b.phi, kPi / 2);
  EXPECT_EQ(c.theta, 0.0);
  EXPECT_EQ(c.phi, 0.0);
  const SphericalAngles mid = barycentric_to_angles({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_NEAR(mid.theta, std::acos(1.0 / std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(mid.theta, 0.95532, 1e-5);
  EXPECT_NEAR(mid.phi, kPi / 4, 1e-12);
  EXPECT_THROW(barycentric_to_angles({0, 0, 0}), ArgumentError);
}

TEST(Filter, ConstantDegreeZero) {
  HarmonicFilter f = HarmonicFilter::zeros(0, 1);
  f.coefficients(0, 0) = 2.0;
  for (double th : {0.0, 1.0, 3.0}) {
    EXPECT_NEAR(eval_filter(f, th, 0.5)(0), 0.56419, 1e-5);
    EXPECT_NEAR(eval_filter(f, th, 0.5)(0), 1.0 / std::sqrt(kPi), 1e-15);
  }
  EXPECT_EQ(eval_filter(HarmonicFilter::zeros(3, 4), 0.7, 0.2).norm(), 0.0);
}

TEST(Filter, MatchesDirectSummation) {
  std::mt19937_64 rng(11);
  HarmonicFilter f = HarmonicFilter::zeros(3, 5);
  f.coefficients = oracle::random_matrix(16, 5, rng);
  for (int trial = 0; trial < 20; ++trial) {
    const double th = std::uniform_real_distribution<double>(0, kPi)(rng);
    const double ph = std::uniform_real_distribution<double>(0, 2 * kPi)(rng);
    const RowVector got = eval_filter(f, th, ph);
    for (int c = 0; c < 5; ++c) {
      EXPECT_NEAR(got(c), oracle::filter_at_angles(f.coefficients, c, th, ph), 1e-12);
    }
  }
}

TEST(Filter, LinearInCoefficients) {
  std::mt19937_64 rng(3);
  HarmonicFilter a = HarmonicFilter::zeros(4, 3), b = a, sum = a;
  a.coefficients = oracle::random_matrix(25, 3, rng);
  b.coefficients = oracle::random_matrix(25, 3, rng);
  sum.coefficients = a.coefficients + b.coefficients;
  for (double th : {0.1, 1.2, 2.9}) {
    const RowVector lhs = eval_filter(sum, th, 4.0);
    const RowVector rhs = eval_filter(a, th, 4.0) + eval_filter(b, th, 4.0);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RadialFilter, EndpointsAndMidpoint) {
  std::mt19937_64 rng(5);
  HarmonicFilter f = HarmonicFilter::radial_zeros(2, 4, 0.8);
  f.coefficients = oracle::random_matrix(9, 4, rng);
  f.radial_constant = oracle::random_matrix(1, 4, rng);
  const double th = 1.1, ph = 2.3;
  const RowVector surface = eval_filter(f, th, ph);
  EXPECT_LT((eval_radial_filter(f, th, ph, 0.8) - surface).norm(), 1e-15);
  EXPECT_EQ(eval_radial_filter(f, th, ph, 0.0), f.radial_constant);
  const RowVector half = eval_radial_filter(f, th, ph, 0.4);
  EXPECT_LT((half - 0.5 * (surface + f.radial_constant)).norm(), 1e-14);
}

TEST(RadialFilter, AffineInRadius) {
  std::mt19937_64 rng(9);
  HarmonicFilter f = HarmonicFilter::radial_zeros(3, 2, 1.5);
  f.coefficients = oracle::random_matrix(16, 2, rng);
  f.radial_constant = oracle::random_matrix(1, 2, rng);
  const RowVector f0 = eval_radial_filter(f, 0.5, 0.5, 0.0);
  const RowVector f1 = eval_radial_filter(f, 0.5, 0.5, 1.5);
  for (double r = 0.0; r <= 1.5; r += 0.1) {
    const RowVector want = f0 + (r / 1.5) * (f1 - f0);
    EXPECT_LT((eval_radial_filter(f, 0.5, 0.5, r) - want).norm(), 1e-13);
  }
}

TEST(RadialFilter, ClampsBeyondRadius) {
  HarmonicFilter f = HarmonicFilter::radial_zeros(1, 1, 1.0);
  f.coefficients(0, 0) = 1.0;
  bool clamped = false;
  const RowVector out = eval_radial_filter(f, 0.3, 0.3, 2.0, &clamped);
  EXPECT_TRUE(clamped);
  EXPECT_EQ(out, eval_radial_filter(f, 0.3, 0.3, 1.0));
}

TEST(Filter, ValidateCatchesShapeMismatch) {
  HarmonicFilter f = HarmonicFilter::zeros(2, 3);
  EXPECT_NO_THROW(f.validate());
  f.coefficients.resize(8, 3);
  EXPECT_THROW(f.validate(), ArgumentError);
}

}  // namespace
}  // namespace meshkit

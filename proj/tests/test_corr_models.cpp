// Copyright 2026 The nscorr Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nscorr/corr_models.hpp"
#include "nscorr/error.hpp"
#include "oracles.hpp"

using namespace nscorr;

namespace {

EqualCrossParams params(int n, int m, double a, double b, double c, CrossKind kind) {
  EqualCrossParams p;
  p.n = n;
  p.m = m;
  p.a = a;
  p.b = b;
  p.c = c;
  p.kind = kind;
  return p;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kOk;
}

double max_singular_value(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

}  // namespace

TEST_CASE("rank-one example: single nonzero zeta eigenvalue") {
  const auto p = params(4, 6, 0.5, 0.5, 0.3, CrossKind::kRankOne);
  const auto corr = build_equal_cross(p);
  const double expected = 24.0 * 0.09 / 8.75;
  CHECK(corr.zeta_eigs()[0] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(corr.zeta_eigs()[0] == doctest::Approx(0.246857).epsilon(1e-6));
  for (std::size_t i = 1; i < corr.zeta_eigs().size(); ++i) {
    CHECK(std::abs(corr.zeta_eigs()[i]) < 1e-14);
  }
  CHECK(zeta_rank_one_eig(p) == doctest::Approx(expected).epsilon(1e-12));

  // Oracle: dense eta from matrix functions, eigenvalues of eta eta^t.
  const Matrix eta = oracle::eta(oracle::equal_cross(4, 0.5), oracle::equal_cross(6, 0.5),
                                 Matrix::Constant(4, 6, 0.3));
  const auto eigs = oracle::sym_eigs(eta * eta.transpose());
  CHECK(eigs.back() == doctest::Approx(expected).epsilon(1e-12));
  CHECK((corr.eta() - eta).norm() < 1e-12);
}

TEST_CASE("rank-one example violating admissibility is rejected") {
  const auto p = params(4, 6, 0.5, 0.5, 0.7, CrossKind::kRankOne);
  CHECK_FALSE(rank_one_admissible(p));
  bool thrown = false;
  try {
    build_equal_cross(p);
  } catch (const NotPositiveDefinite& e) {
    thrown = true;
    CHECK(e.code() == ErrorCode::kModelNotPositiveDefinite);
    CHECK(e.min_eigenvalue() < 0.0);
  }
  CHECK(thrown);
  CHECK(code_of([&] { zeta_rank_one_eig(p); }) == ErrorCode::kModelNotPositiveDefinite);

  // The assembled matrix itself fails the eigenvalue test.
  Matrix xi(10, 10);
  xi.topLeftCorner(4, 4) = equal_cross_matrix(4, 0.5);
  xi.bottomRightCorner(6, 6) = equal_cross_matrix(6, 0.5);
  xi.topRightCorner(4, 6).setConstant(0.7);
  xi.bottomLeftCorner(6, 4).setConstant(0.7);
  CHECK_FALSE(validate_positive_definite(xi).positive_definite);
  CHECK_FALSE(sylvester_positive_definite(xi));
}

TEST_CASE("zero cross coefficient gives the null model for both kinds") {
  for (CrossKind kind : {CrossKind::kRankOne, CrossKind::kExpDecay}) {
    const auto corr = build_equal_cross(params(5, 7, 0.3, 0.6, 0.0, kind));
    CHECK(corr.eta().norm() == 0.0);
    for (double z : corr.zeta_eigs()) CHECK(z == 0.0);
    CHECK(corr.zeta_mean() == 0.0);
  }
  CHECK(zeta_rank_one_eig(params(5, 7, 0.3, 0.6, 0.0, CrossKind::kRankOne)) == 0.0);
}

TEST_CASE("parameter ranges") {
  CHECK(code_of([] { build_equal_cross(params(0, 3, 0.5, 0.5, 0.1, CrossKind::kRankOne)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { build_equal_cross(params(3, 3, 0.0, 0.5, 0.1, CrossKind::kRankOne)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { build_equal_cross(params(3, 3, 0.5, 1.0, 0.1, CrossKind::kRankOne)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { build_equal_cross(params(3, 3, 0.5, 0.5, 1.0, CrossKind::kRankOne)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { build_equal_cross(params(3, 3, 0.5, 0.5, -0.1, CrossKind::kExpDecay)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { build_equal_cross(params(3, 3, std::nan(""), 0.5, 0.1, CrossKind::kRankOne)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { equal_cross_spectrum(0, 0.5); }) == ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { equal_cross_inv_sqrt(3, 0.0); }) == ErrorCode::kParameterOutOfRange);
  CHECK(code_of([] { rank_one_xi_eigs(params(3, 3, 0.5, 0.5, 0.1, CrossKind::kExpDecay)); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(parse_cross_kind("RankOne") == CrossKind::kRankOne);
  CHECK(parse_cross_kind("ExpDecay") == CrossKind::kExpDecay);
  CHECK(code_of([] { parse_cross_kind("Banded"); }) == ErrorCode::kParameterOutOfRange);
}

TEST_CASE("equal-cross spectrum examples") {
  CHECK(equal_cross_spectrum(4, 0.5) == std::vector<double>{0.5, 0.5, 0.5, 2.5});
  CHECK(equal_cross_spectrum(1, 0.37) == std::vector<double>{1.0});
  const auto s = equal_cross_spectrum(3, 0.2);
  const auto dense = oracle::sym_eigs(oracle::equal_cross(3, 0.2));
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(s[2] == doctest::Approx(1.4).epsilon(1e-15));
  for (int i = 0; i < 3; ++i) CHECK(std::abs(s[i] - dense[i]) < 1e-12);
}

TEST_CASE("equal-cross spectrum matches the dense eigensolver") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coeff(0.01, 0.99);
  for (int k = 1; k <= 40; k += 3) {
    const double a = coeff(rng);
    const auto closed = equal_cross_spectrum(k, a);
    const auto dense = oracle::sym_eigs(equal_cross_matrix(k, a));
    for (int i = 0; i < k; ++i) CHECK(oracle::rel_diff(closed[i], dense[i]) < 1e-10);
  }
}

TEST_CASE("closed-form inverse square root") {
  SUBCASE("k = 2, coeff = 0.5") {
    const Matrix r = equal_cross_inv_sqrt(2, 0.5);
    CHECK(r(0, 0) == doctest::Approx(1.115355).epsilon(1e-6));
    CHECK(r(0, 1) == doctest::Approx(-0.298858).epsilon(1e-6));
    Matrix inv(2, 2);
    inv << 4.0 / 3, -2.0 / 3, -2.0 / 3, 4.0 / 3;
    CHECK((r * r - inv).cwiseAbs().maxCoeff() < 1e-12);
    const Matrix oracle_r = oracle::matrix_function(oracle::equal_cross(2, 0.5),
                                                    [](double v) { return 1 / std::sqrt(v); });
    CHECK((r - oracle_r).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("near-identity limit") {
    const Matrix r = equal_cross_inv_sqrt(6, 1e-9);
    CHECK((r - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-6);
  }
  SUBCASE("k = 5, coeff = 0.3") {
    const Matrix r = equal_cross_inv_sqrt(5, 0.3);
    const Matrix x = equal_cross_matrix(5, 0.3);
    CHECK((r - r.transpose()).norm() == 0.0);
    CHECK((r * r * x - Matrix::Identity(5, 5)).norm() / std::sqrt(5.0) < 1e-10);
  }
  SUBCASE("property over sizes and coefficients") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> coeff(0.001, 0.999);
    for (int trial = 0; trial < 60; ++trial) {
      const int k = 1 + trial % 30;
      const double a = coeff(rng);
      const Matrix r = equal_cross_inv_sqrt(k, a);
      const Matrix id = Matrix::Identity(k, k);
      CHECK((r * r * equal_cross_matrix(k, a) - id).norm() / id.norm() < 1e-10);
    }
  }
}

TEST_CASE("rank-one xi spectrum example and dense oracle") {
  const auto p = params(4, 6, 0.5, 0.5, 0.3, CrossKind::kRankOne);
  const auto s = rank_one_xi_eigs(p);
  CHECK(s.lambda_aa == doctest::Approx(2.5));
  CHECK(s.lambda_bb == doctest::Approx(3.5));
  CHECK(s.plus == doctest::Approx((6 + std::sqrt(9.64)) / 2).epsilon(1e-14));
  CHECK(s.minus == doctest::Approx((6 - std::sqrt(9.64)) / 2).epsilon(1e-14));
  const auto all = s.all();
  const auto dense = oracle::sym_eigs(build_equal_cross(p).assemble());
  REQUIRE(all.size() == dense.size());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(oracle::rel_diff(all[i], dense[i]) < 1e-10);

  const auto decoupled = rank_one_xi_eigs(params(4, 6, 0.5, 0.5, 0.0, CrossKind::kRankOne));
  CHECK(decoupled.plus == doctest::Approx(3.5).epsilon(1e-15));
  CHECK(decoupled.minus == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("rank-one xi spectrum over random sizes up to 64") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    const int m = n + static_cast<int>(rng() % (64 - 2 * n + 1 > 0 ? 64 - 2 * n + 1 : 1));
    auto p = params(n, m, u(rng), u(rng), 0.0, CrossKind::kRankOne);
    const double cb = std::sqrt(rank_one_xi_eigs(p).lambda_aa * rank_one_xi_eigs(p).lambda_bb /
                                (double(n) * m));
    p.c = std::min(0.999, cb * u(rng));
    if (!rank_one_admissible(p)) continue;
    const auto all = rank_one_xi_eigs(p).all();
    const auto dense = oracle::sym_eigs(build_equal_cross(p).assemble());
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(oracle::rel_diff(all[i], dense[i]) < 1e-10);
    CHECK(oracle::rel_diff(build_equal_cross(p).zeta_eigs()[0], zeta_rank_one_eig(p)) < 1e-12);
    ++checked;
  }
  CHECK(checked > 40);
}

TEST_CASE("continuity scan in c: eigenvalues positive exactly when admissible") {
  auto p = params(4, 6, 0.5, 0.5, 0.0, CrossKind::kRankOne);
  const double cb = std::sqrt(2.5 * 3.5 / 24.0);
  double previous_minus = rank_one_xi_eigs(p).minus;
  for (int i = 1; i < 1000; ++i) {
    p.c = 0.999 * i / 1000.0;
    const auto s = rank_one_xi_eigs(p);
    const auto all = s.all();
    const bool positive = all.front() > 0.0;
    CHECK(positive == rank_one_admissible(p));
    CHECK(positive == (p.c < cb));
    CHECK(s.minus <= previous_minus + 1e-15);
    CHECK(std::abs(s.minus - previous_minus) < 0.01);
    previous_minus = s.minus;
  }
  p.c = cb;
  CHECK(std::abs(rank_one_xi_eigs(p).minus) < 1e-14);
}

TEST_CASE("admissibility boundary is sharp to 1e-14") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 50);
    const int m = n + static_cast<int>(rng() % 50);
    auto p = params(n, m, u(rng), u(rng), 0.0, CrossKind::kRankOne);
    const double cb = std::sqrt((n * p.a + 1 - p.a) * (m * p.b + 1 - p.b) / (double(n) * m));
    if (cb >= 1.0) continue;
    p.c = cb * (1 - 1e-13);
    CHECK(rank_one_admissible(p));
    CHECK_NOTHROW(build_equal_cross(p));
    p.c = cb;
    CHECK_FALSE(rank_one_admissible(p));
    CHECK(code_of([&] { build_equal_cross(p); }) == ErrorCode::kModelNotPositiveDefinite);
    p.c = std::min(0.9999999, cb * (1 + 1e-13));
    if (p.c > cb) CHECK_FALSE(rank_one_admissible(p));
  }
}

TEST_CASE("accepted models have every eta singular value below one") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  int accepted = 0;
  int rejected = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 16);
    const int m = n + static_cast<int>(rng() % 16);
    const auto kind = (trial % 2) ? CrossKind::kRankOne : CrossKind::kExpDecay;
    const auto p = params(n, m, u(rng), u(rng), u(rng), kind);
    const Matrix xi_ab = cross_block(n, m, p.c, kind);
    Matrix xi(n + m, n + m);
    xi.topLeftCorner(n, n) = oracle::equal_cross(n, p.a);
    xi.bottomRightCorner(m, m) = oracle::equal_cross(m, p.b);
    xi.topRightCorner(n, m) = xi_ab;
    xi.bottomLeftCorner(m, n) = xi_ab.transpose();
    const double dense_min = oracle::sym_eigs(xi).front();
    try {
      const auto corr = build_equal_cross(p);
      ++accepted;
      CHECK(max_singular_value(corr.eta()) < 1.0);
      CHECK(corr.zeta_eigs().front() < 1.0);
      CHECK(dense_min > 0.0);
      if (kind == CrossKind::kRankOne) CHECK(rank_one_admissible(p));
    } catch (const NotPositiveDefinite&) {
      ++rejected;
      if (kind == CrossKind::kRankOne) CHECK_FALSE(rank_one_admissible(p));
      CHECK(dense_min < 1e-9);
    }
  }
  CHECK(accepted > 100);
  CHECK(rejected > 100);
}

TEST_CASE("positive definiteness checks") {
  CHECK(validate_positive_definite(Matrix::Identity(3, 3)).positive_definite);
  CHECK(validate_positive_definite(Matrix::Identity(3, 3)).min_eigenvalue == doctest::Approx(1.0));
  Matrix asym = Matrix::Identity(3, 3);
  asym(0, 1) = 0.2;
  CHECK(code_of([&] { validate_positive_definite(asym); }) == ErrorCode::kNonSymmetricInput);
  CHECK(code_of([] { validate_positive_definite(Matrix::Identity(2, 3)); }) ==
        ErrorCode::kNonSymmetricInput);
  Matrix singular = Matrix::Ones(3, 3);
  const auto diag = validate_positive_definite(singular);
  CHECK_FALSE(diag.positive_definite);
  CHECK(std::abs(diag.min_eigenvalue) < 1e-12);

  // Sylvester cross-check on random small symmetric matrices.
  std::mt19937_64 rng(16);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 300; ++trial) {
    const int k = 1 + trial % 12;
    Matrix x(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) x(i, j) = gauss(rng);
    Matrix s = x * x.transpose() / k;
    s.diagonal().array() += gauss(rng) * 0.5;
    s = 0.5 * (s + s.transpose());
    const double min_eig = oracle::sym_eigs(s).front();
    if (std::abs(min_eig) < 1e-6) continue;
    CHECK(validate_positive_definite(s).positive_definite == sylvester_positive_definite(s));
    CHECK(validate_positive_definite(s).positive_definite == (min_eig > 0));
  }
}

TEST_CASE("custom blocks") {
  Matrix aa = oracle::equal_cross(3, 0.2);
  aa(0, 2) = aa(2, 0) = -0.1;
  const Matrix bb = oracle::equal_cross(4, 0.4);
  Matrix ab(3, 4);
  ab << 0.1, 0.0, 0.05, 0.2, -0.1, 0.1, 0.0, 0.0, 0.0, 0.15, 0.1, -0.05;
  const auto corr = PartitionedCorrelation::from_blocks(aa, bb, ab);
  const Matrix eta = oracle::eta(aa, bb, ab);
  CHECK((corr.eta() - eta).norm() < 1e-12);
  const auto zeta = oracle::sym_eigs(eta * eta.transpose());
  for (int i = 0; i < 3; ++i) CHECK(std::abs(corr.zeta_eigs()[i] - zeta[2 - i]) < 1e-12);
  CHECK_FALSE(corr.params().has_value());
  const auto j = to_json(corr);
  CHECK(j["cross_kind"] == "Custom");
  CHECK(j["a"].is_null());
  CHECK(j["zeta_eigs"].size() == 3);

  Matrix not_unit = aa;
  not_unit(1, 1) = 1.5;
  CHECK(code_of([&] { PartitionedCorrelation::from_blocks(not_unit, bb, ab); }) ==
        ErrorCode::kParameterOutOfRange);
  CHECK(code_of([&] { PartitionedCorrelation::from_blocks(aa, bb, Matrix::Zero(4, 3)); }) ==
        ErrorCode::kDimensionMismatch);
  Matrix asym = aa;
  asym(0, 1) = 0.3;
  CHECK(code_of([&] { PartitionedCorrelation::from_blocks(asym, bb, ab); }) ==
        ErrorCode::kNonSymmetricInput);
  CHECK(code_of([&] {
          PartitionedCorrelation::from_blocks(aa, bb, Matrix::Constant(3, 4, 0.9));
        }) == ErrorCode::kModelNotPositiveDefinite);
}

TEST_CASE("json document") {
  const auto corr = build_equal_cross(params(4, 6, 0.5, 0.5, 0.3, CrossKind::kRankOne));
  const auto j = to_json(corr);
  CHECK(j["n"] == 4);
  CHECK(j["m"] == 6);
  CHECK(j["a"] == 0.5);
  CHECK(j["c"] == 0.3);
  CHECK(j["cross_kind"] == "RankOne");
  REQUIRE(j["zeta_eigs"].size() == 4);
  CHECK(j["zeta_eigs"][0].get<double>() == corr.zeta_eigs()[0]);
}

TEST_CASE("exp-decay cross block layout") {
  const Matrix x = cross_block(3, 5, 0.5, CrossKind::kExpDecay);
  CHECK(x(0, 0) == 0.5);
  CHECK(x(0, 1) == 0.5);
  CHECK(x(0, 2) == 0.25);
  CHECK(x(2, 4) == 0.25);
  CHECK(x(2, 0) == 0.25);
  CHECK(x(0, 4) == 0.0625);
  const auto corr = build_equal_cross(params(3, 5, 0.5, 0.5, 0.05, CrossKind::kExpDecay));
  const Matrix eta = oracle::eta(oracle::equal_cross(3, 0.5), oracle::equal_cross(5, 0.5),
                                 cross_block(3, 5, 0.05, CrossKind::kExpDecay));
  CHECK((corr.eta() - eta).norm() < 1e-13);
}

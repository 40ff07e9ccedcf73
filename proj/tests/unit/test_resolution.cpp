// Copyright (c) 2026 the sparse-imager authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "oracles.hpp"
#include "simg/resolution.hpp"
#include "simg/rng.hpp"

using namespace simg;

namespace {

CMatrix unit_columns(Index rows, Index cols, std::uint64_t seed) {
  GaussianStream rng(seed);
  CMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    m.col(j) = rng.cnormal_vector(rows);
    m.col(j).normalize();
  }
  return m;
}

// direct double-loop evaluation of the coherent misfit
double coherent_misfit_oracle(const GridSupport& rho, const CVector& eta, const CMatrix& a,
                              double threshold) {
  double total = 0.0;
  for (std::size_t j = 0; j < rho.indices.size(); ++j) {
    const Index cj = rho.indices[j];
    Complex acc(0.0, 0.0);
    for (Index k = 0; k < a.cols(); ++k) {
      Complex inner(0.0, 0.0);
      for (Index r = 0; r < a.rows(); ++r) inner += std::conj(a(r, cj)) * a(r, k);
      if (std::abs(inner) >= threshold) acc += inner * eta(k);
    }
    total += std::abs(rho.values[j] - acc);
  }
  return total;
}

}  // namespace

TEST_SUITE("resolution") {

TEST_CASE("mutual coherence of orthonormal columns is zero and of a duplicate is one") {
  CHECK(mutual_coherence(CMatrix::Identity(6, 4)) == 0.0);
  CMatrix dup(6, 3);
  dup.col(0) = CVector::Unit(6, 0);
  dup.col(1) = CVector::Unit(6, 3);
  dup.col(2) = dup.col(0);
  CHECK(mutual_coherence(dup) == doctest::Approx(1.0));
  CHECK_THROWS_AS(mutual_coherence(CMatrix::Identity(4, 1)), std::invalid_argument);
}

TEST_CASE("orthonormal vicinities are singletons and overlap free") {
  const CMatrix a = CMatrix::Identity(8, 8);
  const VicinityMap map = compute_vicinities(a, {1, 4, 6}, 3);
  for (std::size_t j = 0; j < 3; ++j) {
    REQUIRE(map.vicinities[j].size() == 1);
    CHECK(map.vicinities[j][0] == map.support[j]);
  }
  CHECK(map.overlap_free);
  CHECK(map.union_indices == std::vector<Index>{1, 4, 6});
  CHECK(map.in_union(4));
  CHECK_FALSE(map.in_union(0));
}

TEST_CASE("duplicated support columns share vicinities and overlap") {
  CMatrix a = CMatrix::Identity(8, 5);
  a.col(3) = a.col(1);
  const VicinityMap map = compute_vicinities(a, {1, 3}, 2);
  CHECK_FALSE(map.overlap_free);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::find(map.vicinities[j].begin(), map.vicinities[j].end(), 1) != map.vicinities[j].end());
    CHECK(std::find(map.vicinities[j].begin(), map.vicinities[j].end(), 3) != map.vicinities[j].end());
  }
}

TEST_CASE("vicinity membership is symmetric over the support") {
  const CMatrix a = unit_columns(10, 30, 51);
  const std::vector<Index> support{2, 11, 17, 28};
  const VicinityMap map = compute_vicinities(a, support, 4);
  for (std::size_t j = 0; j < support.size(); ++j)
    for (std::size_t k = 0; k < support.size(); ++k) {
      const bool k_in_j = std::find(map.vicinities[j].begin(), map.vicinities[j].end(),
                                    support[k]) != map.vicinities[j].end();
      const bool j_in_k = std::find(map.vicinities[k].begin(), map.vicinities[k].end(),
                                    support[j]) != map.vicinities[k].end();
      CHECK(k_in_j == j_in_k);
    }
  CHECK_THROWS_AS(compute_vicinities(a, {}, 0), std::invalid_argument);
  CHECK_THROWS_AS(compute_vicinities(a, support, 3), std::invalid_argument);
}

TEST_CASE("coherent misfit vanishes when eta equals rho on clean vicinities") {
  const CMatrix a = CMatrix::Identity(12, 9);
  GridSupport rho;
  rho.length = 9;
  rho.indices = {2, 6};
  rho.values = {Complex(1.0, -0.5), Complex(-0.25, 0.75)};
  const VicinityMap map = compute_vicinities(a, rho.indices, 2);
  CHECK(coherent_misfit(rho, rho.dense(), a, map) <= 1e-15);
  CHECK(coherent_misfit(rho, CVector::Zero(9), a, map) ==
        doctest::Approx(rho.dense().lpNorm<1>()).epsilon(1e-14));
}

TEST_CASE("coherent misfit matches the double-loop oracle on a random instance") {
  const CMatrix a = unit_columns(8, 20, 53);
  GridSupport rho;
  rho.length = 20;
  rho.indices = {4, 13};
  rho.values = {Complex(0.8, 0.1), Complex(-0.4, 0.6)};
  const VicinityMap map = compute_vicinities(a, rho.indices, 2);
  GaussianStream rng(54);
  const CVector eta = rng.cnormal_vector(20);
  const double fast = coherent_misfit(rho, eta, a, map);
  const double slow = coherent_misfit_oracle(rho, eta, a, 1.0 / 6.0);
  CHECK(fast == doctest::Approx(slow).epsilon(1e-12));

  GridSupport wrong = rho;
  wrong.indices = {4, 14};
  CHECK_THROWS_AS(coherent_misfit(wrong, eta, a, map), std::invalid_argument);
}

TEST_CASE("incoherent remainder is the l1 mass outside the union") {
  const CMatrix a = CMatrix::Identity(10, 7);
  const VicinityMap map = compute_vicinities(a, {1, 5}, 2);

  CVector inside = CVector::Zero(7);
  inside(1) = Complex(2.0, 1.0);
  inside(5) = Complex(0.0, -3.0);
  CHECK(incoherent_remainder(inside, map) == 0.0);

  CVector outside = CVector::Zero(7);
  outside(3) = Complex(0.3, -0.4);
  CHECK(incoherent_remainder(outside, map) == doctest::Approx(0.5).epsilon(1e-15));

  GaussianStream rng(55);
  const CVector eta = rng.cnormal_vector(7);
  double in_mass = std::abs(eta(1)) + std::abs(eta(5));
  CHECK(incoherent_remainder(eta, map) ==
        doctest::Approx(eta.lpNorm<1>() - in_mass).epsilon(1e-13));

  // entries beyond the image length always count as outside
  CVector augmented(9);
  augmented.setZero();
  augmented(7) = Complex(1.0, 0.0);
  augmented(8) = Complex(0.0, 1.0);
  CHECK(incoherent_remainder(augmented, map) == doctest::Approx(2.0));
}

TEST_CASE("gamma estimate on the identity equals the largest sampled l1 norm") {
  const CMatrix d = CMatrix::Identity(16, 16);
  DenseOperator op(d);
  GammaProtocol protocol;
  protocol.trials = 50;
  protocol.seed = 77;
  protocol.solver.residual_tol = 1e-10;
  protocol.solver.max_iters = 20000;
  const double gamma = estimate_gamma(op, protocol);

  // the minimal-l1 solution of I x = c is c itself, so the estimate must be
  // the largest l1 norm among the probed unit directions
  double expected = 1.0;  // canonical directions
  GaussianStream rng(77);
  for (int t = 0; t < 50; ++t) {
    CVector c = rng.cnormal_vector(16);
    c.normalize();
    expected = std::max(expected, c.lpNorm<1>());
  }
  CHECK(gamma == doctest::Approx(expected).epsilon(1e-5));
  CHECK(gamma <= 4.0);  // sqrt(N) ceiling
  CHECK(gamma >= 1.0);
}

TEST_CASE("gamma estimate of the trivial system is one") {
  CMatrix d(1, 1);
  d << Complex(1.0, 0.0);
  DenseOperator op(d);
  GammaProtocol protocol;
  protocol.trials = 5;
  protocol.seed = 3;
  protocol.solver.residual_tol = 1e-12;
  CHECK(estimate_gamma(op, protocol) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("l1 norms of solved instances are stable in the data") {
  const CMatrix d = unit_columns(8, 20, 59);
  DenseOperator op(d);
  GammaProtocol protocol;
  protocol.trials = 100;
  protocol.seed = 61;
  protocol.solver.residual_tol = 1e-9;
  const double gamma_hat = estimate_gamma(op, protocol);

  GelmaSettings settings;
  settings.residual_tol = 1e-9;
  settings.max_iters = 50000;
  GaussianStream rng(62);
  for (int trial = 0; trial < 4; ++trial) {
    const CVector b1 = rng.cnormal_vector(8);
    const CVector b2 = b1 + 0.1 * rng.cnormal_vector(8);
    settings.tau = 0.1 * (d.adjoint() * b1).cwiseAbs().maxCoeff();
    const SolveResult r1 = gelma_solve(op, b1, settings);
    const SolveResult r2 = gelma_solve(op, b2, settings);
    REQUIRE(r1.converged);
    REQUIRE(r2.converged);
    const double lhs = std::abs(r1.solution.lpNorm<1>() - r2.solution.lpNorm<1>());
    CHECK(lhs <= gamma_hat * (b1 - b2).norm() + 1e-9);
  }
}

TEST_CASE("eigenvalue bounds: identity and analytic two by two") {
  const EigenvalueBoundsReport id = hermitian_eigenvalue_bounds(CMatrix::Identity(4, 4), 0.0);
  CHECK(id.lower == 1.0);
  CHECK(id.upper == 1.0);
  CHECK(id.holds);

  const double c = 0.35;
  CMatrix two(2, 2);
  two << Complex(1.0, 0.0), Complex(0.0, c), Complex(0.0, -c), Complex(1.0, 0.0);
  const EigenvalueBoundsReport r = hermitian_eigenvalue_bounds(two, c);
  CHECK(r.lower == doctest::Approx(1.0 - c));
  CHECK(r.upper == doctest::Approx(1.0 + c));
  CHECK(r.holds);

  CMatrix big(3, 3);
  big.setIdentity();
  big(0, 1) = big(1, 0) = Complex(0.6, 0.0);
  CHECK_THROWS_AS(hermitian_eigenvalue_bounds(big, 0.6), std::invalid_argument);  // (M-1)c >= 1
}

TEST_CASE("gram matrices of incoherent unit columns satisfy the spectral bounds") {
  GaussianStream rng(63);
  int tested = 0;
  while (tested < 200) {
    CMatrix cols(40, 5);
    for (Index j = 0; j < 5; ++j) {
      cols.col(j) = rng.cnormal_vector(40);
      cols.col(j).normalize();
    }
    const CMatrix gram = cols.adjoint() * cols;
    double c = 0.0;
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j)
        if (i != j) c = std::max(c, std::abs(gram(i, j)));
    if (4 * c > 0.9) continue;
    CMatrix g = gram;
    for (Index i = 0; i < 5; ++i) g(i, i) = Complex(1.0, 0.0);  // scrub round-off on the diagonal
    const EigenvalueBoundsReport r = hermitian_eigenvalue_bounds(g, c);
    CHECK(r.holds);
    ++tested;
  }
}

TEST_CASE("vicinity extents split into range and cross-range pixel spans") {
  ImagingConfig config = oracle::config(8, 6, 0.5, 0.4, 30.0, 15, 15, 1.0);
  const SensingMatrix a = build_sensing_matrix(config);
  const Index center = 7 * 15 + 7;
  const VicinityMap map = compute_vicinities(a.entries, {center}, 1);
  const VicinityExtent extent = vicinity_extent(map, 0, config);
  CHECK(extent.range_pixels >= 1);
  CHECK(extent.cross_pixels >= 1);
  CHECK(extent.range_pixels <= 15);
  CHECK(extent.cross_pixels <= 15);
  CHECK_THROWS_AS(vicinity_extent(map, 3, config), std::invalid_argument);
}

}  // TEST_SUITE

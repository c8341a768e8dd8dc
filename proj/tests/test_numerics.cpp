#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "tscs/errors.hpp"
#include "tscs/numerics.hpp"

using namespace tscs;

namespace {

double identity_error(const ComplexMatrix& f) {
  return (f * f.adjoint() - ComplexMatrix::Identity(f.rows(), f.cols())).norm();
}

}  // namespace

TEST_CASE("dft_matrix small cases") {
  const auto f1 = dft_matrix(1);
  CHECK(f1.rows() == 1);
  CHECK(std::abs(f1(0, 0) - Complex(1.0, 0.0)) < 1e-15);

  const auto f2 = dft_matrix(2);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2(0, 0) - h) < 1e-15);
  CHECK(std::abs(f2(0, 1) - h) < 1e-15);
  CHECK(std::abs(f2(1, 0) - h) < 1e-15);
  CHECK(std::abs(f2(1, 1) + h) < 1e-15);

  CHECK(identity_error(dft_matrix(8)) < 1e-12);
  CHECK_THROWS_AS(dft_matrix(0), InvalidArgument);
}

TEST_CASE("dft_matrix is unitary across sizes") {
  for (int n : {1, 2, 3, 5, 7, 16, 31, 64, 128, 257})
    CHECK_MESSAGE(identity_error(dft_matrix(n)) < 1e-10, "N=" << n);
}

TEST_CASE("dft_matrix matches naive transform of basis vectors") {
  const int n = 12;
  const auto f = dft_matrix(n);
  for (int i = 0; i < n; ++i) {
    ComplexVector e = ComplexVector::Zero(n);
    e[i] = 1.0;
    CHECK((f * e - oracle::naive_dft(e)).norm() < 1e-12);
  }
}

TEST_CASE("circ_xcorr_1d impulse shifts") {
  ComplexVector u = ComplexVector::Zero(4), v = ComplexVector::Zero(4);
  u[0] = 1.0;
  v[1] = 1.0;
  const auto c = circ_xcorr_1d(u, v);
  CHECK(signed_offset(static_cast<int>(argmax(c)), 4) == 1);
  CHECK(argmax(circ_xcorr_1d(u, u)) == 0);
  CHECK_THROWS_AS(circ_xcorr_1d(u, ComplexVector::Zero(5)), DimensionError);
}

TEST_CASE("circ_xcorr_1d recovers a -16 shift of a random vector") {
  Rng rng(7);
  ComplexVector u = oracle::random_complex(64, 1, rng);
  u /= u.norm();
  const ComplexVector v = oracle::rotate(u, -16);
  const auto c = circ_xcorr_1d(u, v);
  CHECK(oracle::best_shift_1d(u, v) == 48);  // brute force over all 64 shifts
  CHECK(static_cast<int>(argmax(c)) == 48);
  CHECK(signed_offset(static_cast<int>(argmax(c)), 64) == -16);
}

TEST_CASE("circ_xcorr_1d matches brute force values") {
  Rng rng(11);
  const ComplexVector u = oracle::random_complex(20, 1, rng);
  const ComplexVector v = oracle::random_complex(20, 1, rng);
  const auto c = circ_xcorr_1d(u, v);
  for (int d = 0; d < 20; ++d) CHECK(std::abs(c[d] - std::abs(u.dot(oracle::rotate(v, -d)))) < 1e-12);
}

TEST_CASE("property: circ_xcorr_1d shift round trip") {
  // generate a support with a known shift, recover it, re-index, compare
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 8 + static_cast<int>(rng() % 120);
    const ComplexVector u = oracle::random_complex(n, 1, rng);
    const int shift = static_cast<int>(rng() % n) - n / 2;
    const ComplexVector v = oracle::rotate(u, shift);
    const int raw = static_cast<int>(argmax(circ_xcorr_1d(u, v)));
    REQUIRE(raw == oracle::best_shift_1d(u, v));
    CHECK(signed_offset(raw, n) == signed_offset(wrap_index(shift, n), n));
    CHECK((oracle::rotate(u, raw) - v).norm() < 1e-12);
  }
}

TEST_CASE("circ_xcorr_2d impulse and identity") {
  ComplexMatrix u = ComplexMatrix::Zero(4, 8), v = ComplexMatrix::Zero(4, 8);
  u(0, 0) = 1.0;
  v(2, 3) = 1.0;
  const auto [d1, d2] = argmax(circ_xcorr_2d(u, v));
  CHECK(d1 == 2);
  CHECK(d2 == 3);
  // the canonical signed form of 2 on a 4-point axis is -2 (same shift modulo 4)
  CHECK(signed_offset(static_cast<int>(d1), 4) == -2);
  CHECK(signed_offset(static_cast<int>(d2), 8) == 3);

  Rng rng(3);
  const ComplexMatrix w = oracle::random_complex(5, 6, rng);
  const auto [e1, e2] = argmax(circ_xcorr_2d(w, w));
  CHECK(e1 == 0);
  CHECK(e2 == 0);
  CHECK_THROWS_AS(circ_xcorr_2d(u, ComplexMatrix::Zero(8, 4)), DimensionError);
}

TEST_CASE("circ_xcorr_2d recovers a (-3, 5) shift on 8x8") {
  Rng rng(5);
  const ComplexMatrix u = oracle::random_complex(8, 8, rng);
  ComplexMatrix v(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) v(i, j) = u(wrap_index(i + 3, 8), wrap_index(j - 5, 8));
  // brute force over the 64 shifts
  int b1 = 0, b2 = 0;
  double best = -1;
  for (int s1 = 0; s1 < 8; ++s1)
    for (int s2 = 0; s2 < 8; ++s2) {
      Complex acc = 0;
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) acc += std::conj(u(i, j)) * v((i + s1) % 8, (j + s2) % 8);
      if (std::abs(acc) > best) {
        best = std::abs(acc);
        b1 = s1;
        b2 = s2;
      }
    }
  const auto [d1, d2] = argmax(circ_xcorr_2d(u, v));
  CHECK(d1 == b1);
  CHECK(d2 == b2);
  CHECK(wrap_index(static_cast<int>(d1), 8) == wrap_index(-3, 8));
  CHECK(wrap_index(static_cast<int>(d2), 8) == wrap_index(5, 8));
  CHECK(signed_offset(static_cast<int>(d1), 8) == -3);
}

TEST_CASE("circ_xcorr_2d with one column reduces to circ_xcorr_1d") {
  Rng rng(13);
  for (int n : {1, 4, 17, 64}) {
    const ComplexVector u = oracle::random_complex(n, 1, rng);
    const ComplexVector v = oracle::random_complex(n, 1, rng);
    const RealMatrix c2 = circ_xcorr_2d(u, v);
    const RealVector c1 = circ_xcorr_1d(u, v);
    CHECK(c2.cols() == 1);
    CHECK((c2.col(0) - c1).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("ls_solve small systems") {
  ComplexVector y(3);
  y << 1.0, Complex(0, 1), -2.0;
  auto s = ls_solve(ComplexMatrix::Identity(3, 3), y);
  CHECK((s.x - y).norm() < 1e-14);
  CHECK_FALSE(s.rank_deficient);

  ComplexMatrix a(2, 1);
  a << 2.0, 0.0;
  ComplexVector y2(2);
  y2 << 4.0, 0.0;
  s = ls_solve(a, y2);
  REQUIRE(s.x.size() == 1);
  CHECK(std::abs(s.x[0] - 2.0) < 1e-14);

  CHECK_THROWS_AS(ls_solve(a, y), DimensionError);
}

TEST_CASE("ls_solve recovers a forward-constructed solution") {
  Rng rng(17);
  const ComplexMatrix a = oracle::random_complex(16, 4, rng);
  const ComplexVector x0 = oracle::random_complex(4, 1, rng);
  const auto s = ls_solve(a, a * x0);
  CHECK((s.x - x0).norm() < 1e-10);
}

TEST_CASE("property: ls_solve residual is orthogonal to the column space") {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const int t = 4 + static_cast<int>(rng() % 40);
    const int s = 1 + static_cast<int>(rng() % t);
    const ComplexMatrix a = oracle::random_complex(t, s, rng);
    const ComplexVector y = oracle::random_complex(t, 1, rng);
    const auto sol = ls_solve(a, y);
    CHECK((a.adjoint() * (y - a * sol.x)).norm() < 1e-8 * y.norm());
  }
}

TEST_CASE("ls_solve flags rank deficiency and returns the minimum-norm solution") {
  ComplexMatrix a(3, 2);
  a << 1.0, 1.0, 2.0, 2.0, 0.0, 0.0;  // identical columns
  ComplexVector y(3);
  y << 2.0, 4.0, 0.0;
  const auto s = ls_solve(a, y);
  CHECK(s.rank_deficient);
  CHECK(std::abs(s.x[0] - 1.0) < 1e-12);
  CHECK(std::abs(s.x[1] - 1.0) < 1e-12);
}

TEST_CASE("top_l_indices") {
  RealVector v(4);
  v << 0.1, 5, 3, 5;
  CHECK(top_l_indices(v, 2) == IndexSet(4, {1, 3}));
  RealVector w(3);
  w << 2, 2, 1;
  CHECK(top_l_indices(w, 1) == IndexSet(3, {0}));
  CHECK_THROWS_AS(top_l_indices(w, 4), InvalidArgument);

  Rng rng(23);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    RealVector r(128);
    for (auto& x : r) x = uni(rng);
    CHECK(top_l_indices(r, 4).indices() == oracle::top_by_sort(r, 4));
  }
}

TEST_CASE("IndexSet invariants") {
  CHECK_THROWS_AS(IndexSet(4, {1, 1}), InvalidArgument);
  CHECK_THROWS_AS(IndexSet(4, {4}), InvalidArgument);
  CHECK_THROWS_AS(IndexSet(4, {-1}), InvalidArgument);
  const IndexSet s(8, {6, 1, 3});
  CHECK(s.indices() == std::vector<int>{1, 3, 6});
  CHECK(s.shifted(3) == IndexSet(8, {4, 6, 1}));
  int dropped = 0;
  CHECK(IndexSet::deduplicated(8, {2, 2, 5}, &dropped) == IndexSet(8, {2, 5}));
  CHECK(dropped == 1);
}

TEST_CASE("signed_offset range") {
  CHECK(signed_offset(48, 64) == -16);
  CHECK(signed_offset(54, 64) == -10);
  CHECK(signed_offset(31, 64) == 31);
  CHECK(signed_offset(32, 64) == -32);
  CHECK(signed_offset(2, 5) == 2);
  CHECK(signed_offset(3, 5) == -2);
  CHECK(signed_offset(0, 1) == 0);
}

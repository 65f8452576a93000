#include <doctest.h>

#include <fkm/matrix.hpp>

#include <sstream>

using namespace fkm;

namespace {

Mat from_longs(int r, int c, std::initializer_list<long> vals) {
  Mat m(r, c);
  auto it = vals.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rat(*it++);
  return m;
}

Mat random_matrix(SplitMix64& rng, int r, int c) {
  Mat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = rng.rational();
  return m;
}

}  // namespace

TEST_CASE("rank: identity and rank-one") {
  CHECK(rank(Mat::identity(4)) == 4);
  Mat ones(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) ones(i, j) = 1;
  CHECK(rank(ones) == 1);
  CHECK(rank(Mat(5, 7)) == 0);
}

TEST_CASE("rank: transpose invariance and A A^T law on random rationals") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Mat a = random_matrix(rng, 5, 3);
    CHECK(rank(a) == rank(a.transpose()));
    CHECK(rank(a * a.transpose()) == rank(a));
  }
}

TEST_CASE("rank: fraction-free elimination handles rational entries") {
  Mat m = from_longs(3, 3, {2, 4, 6, 1, 2, 3, 0, 1, 1});
  m(0, 0) = rat(1, 2);
  CHECK(rank(m) == 3);
  // make row 2 = row 0 scaled
  Mat d(2, 3);
  d(0, 0) = rat(1, 3);
  d(0, 1) = rat(2, 5);
  d(0, 2) = rat(-1, 7);
  d(1, 0) = rat(2, 3);
  d(1, 1) = rat(4, 5);
  d(1, 2) = rat(-2, 7);
  CHECK(rank(d) == 1);
}

TEST_CASE("ldl_psd: identity") {
  auto c = ldl_psd(Mat::identity(2));
  REQUIRE(c.is_psd());
  CHECK(c.L == Mat::identity(2));
  CHECK(c.D == std::vector<Rational>{rat(1), rat(1)});
}

TEST_CASE("ldl_psd: rank-one psd with zero pivot") {
  Mat m = from_longs(2, 2, {1, -1, -1, 1});
  auto c = ldl_psd(m);
  REQUIRE(c.is_psd());
  CHECK(c.D[0] == 1);
  CHECK(c.D[1] == 0);
  CHECK(c.positive_pivots() == 1);
  CHECK(c.reconstruct() == m);
}

TEST_CASE("ldl_psd: diag(9,9,9,-3) rejected with witness e_4") {
  Mat m(4, 4);
  m(0, 0) = 9;
  m(1, 1) = 9;
  m(2, 2) = 9;
  m(3, 3) = -3;
  auto c = ldl_psd(m);
  REQUIRE(!c.is_psd());
  CHECK(c.witness == std::vector<Rational>{rat(0), rat(0), rat(0), rat(1)});
  CHECK(c.witness_value == -3);
  CHECK(quadratic_value(m, c.witness) == -3);
}

TEST_CASE("ldl_psd: zero pivot with nonzero residual row yields exact witness") {
  // [[0, 1], [1, 0]] is indefinite.
  Mat m = from_longs(2, 2, {0, 1, 1, 0});
  auto c = ldl_psd(m);
  REQUIRE(!c.is_psd());
  CHECK(quadratic_value(m, c.witness) == c.witness_value);
  CHECK(c.witness_value < 0);
}

TEST_CASE("ldl_psd: asymmetric input is an error") {
  Mat m = from_longs(2, 2, {1, 2, 3, 4});
  CHECK_THROWS_AS(ldl_psd(m), std::invalid_argument);
}

TEST_CASE("ldl_psd: reconstruction and witnesses on random symmetric matrices") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + int(rng.range(1, 6));
    Mat a = random_matrix(rng, n, n);
    Mat s = a + a.transpose();
    auto c = ldl_psd(s);
    if (c.is_psd()) {
      CHECK(c.reconstruct() == s);
      for (const auto& d : c.D) CHECK(d >= 0);
      CHECK(c.positive_pivots() == rank(s));
    } else {
      CHECK(quadratic_value(s, c.witness) == c.witness_value);
      CHECK(c.witness_value < 0);
    }
    // Gram matrices are always PSD and reconstruct exactly.
    Mat g = a * a.transpose();
    auto cg = ldl_psd(g);
    REQUIRE(cg.is_psd());
    CHECK(cg.reconstruct() == g);
    CHECK(cg.positive_pivots() == rank(a));
  }
}

TEST_CASE("kron: identities and unit pattern") {
  CHECK(kron(Mat::identity(2), Mat::identity(2)) == Mat::identity(4));
  Mat j = from_longs(2, 2, {0, -1, 1, 0});
  Mat k = kron(j, Mat::identity(2));
  CHECK(k.rows() == 4);
  CHECK(k(0, 2) == -1);
  CHECK(k(1, 3) == -1);
  CHECK(k(2, 0) == 1);
  CHECK(k(3, 1) == 1);
  // E_12 - E_21 tensor I_2 has exactly 4 nonzero entries, all +-1
  Mat u(2, 2);
  u(0, 1) = 1;
  u(1, 0) = -1;
  Mat ku = kron(u, Mat::identity(2));
  int nonzero = 0;
  for (int i = 0; i < 4; ++i)
    for (int jj = 0; jj < 4; ++jj)
      if (ku(i, jj) != 0) {
        ++nonzero;
        CHECK((ku(i, jj) == 1 || ku(i, jj) == -1));
      }
  CHECK(nonzero == 4);
  // mixed-product property on random inputs
  SplitMix64 rng(3);
  Mat a = random_matrix(rng, 2, 3), b = random_matrix(rng, 3, 2);
  Mat c = random_matrix(rng, 2, 2), d = random_matrix(rng, 2, 3);
  CHECK(kron(a, c) * kron(b, d) == kron(a * b, c * d));
}

TEST_CASE("blocks: assemble/split round trip") {
  Mat i3 = Mat::identity(3);
  CHECK(assemble_blocks({{i3}}) == i3);

  Mat j = from_longs(2, 2, {0, -1, 1, 0});
  Mat m = assemble_blocks({{Mat::identity(2), j}, {-j, Mat::identity(2)}});
  CHECK(m.rows() == 4);
  CHECK(m.is_symmetric());

  SplitMix64 rng(11);
  std::vector<std::vector<Mat>> grid(3, std::vector<Mat>(3));
  for (auto& row : grid)
    for (auto& blk : row) blk = random_matrix(rng, 2, 2);
  CHECK(split_blocks(assemble_blocks(grid), 2) == grid);

  CHECK_THROWS_AS(assemble_blocks({{Mat::identity(2), Mat::identity(3)}}), std::invalid_argument);
  CHECK_THROWS_AS(split_blocks(Mat::identity(4), 3), std::invalid_argument);
}

TEST_CASE("matrix text format: bit-exact round trip") {
  SplitMix64 rng(42);
  Mat m = random_matrix(rng, 4, 3);
  m(1, 2) = rat(-7, 3);
  const std::string text = m.to_text();
  CHECK(Mat::from_text(text) == m);
  CHECK(Mat::from_text(text).to_text() == text);

  Mat p = Mat::from_text("2 2\n1/2 -3\n0 5/7\n");
  CHECK(p(0, 0) == rat(1, 2));
  CHECK(p(1, 1) == rat(5, 7));
  CHECK_THROWS_AS(Mat::from_text("2 2\n1 2\n3\n"), std::invalid_argument);
  CHECK_THROWS_AS(Mat::from_text("2 2\n1 2\n3 x\n"), std::invalid_argument);
}

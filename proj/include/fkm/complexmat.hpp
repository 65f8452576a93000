#ifndef FKM_COMPLEXMAT_HPP
#define FKM_COMPLEXMAT_HPP

#include <fkm/matrix.hpp>

#include <stdexcept>
#include <vector>

namespace fkm {

// Complex matrix with exact rational real/imaginary parts. Just enough
// arithmetic for Pauli/Dirac products and the iota_k realification.
struct CMat {
  Mat re, im;

  CMat() = default;
  CMat(int rows, int cols) : re(rows, cols), im(rows, cols) {}
  explicit CMat(const Mat& real_part) : re(real_part), im(real_part.rows(), real_part.cols()) {}

  int rows() const { return re.rows(); }
  int cols() const { return re.cols(); }

  static CMat identity(int n) { return CMat(Mat::identity(n)); }

  bool operator==(const CMat& o) const { return re == o.re && im == o.im; }

  CMat operator-() const {
    CMat r = *this;
    r.re = -r.re;
    r.im = -r.im;
    return r;
  }

  friend CMat operator+(const CMat& a, const CMat& b) {
    CMat r;
    r.re = a.re + b.re;
    r.im = a.im + b.im;
    return r;
  }

  friend CMat operator*(const CMat& a, const CMat& b) {
    CMat r;
    r.re = a.re * b.re - a.im * b.im;
    r.im = a.re * b.im + a.im * b.re;
    return r;
  }

  // Multiplication by the imaginary unit.
  CMat times_i() const {
    CMat r;
    r.re = -im;
    r.im = re;
    return r;
  }

  // Conjugate transpose.
  CMat hermitian() const {
    CMat r;
    r.re = re.transpose();
    r.im = -im.transpose();
    return r;
  }
};

// iota(a + bi) = a I_2 + b [[0,-1],[1,0]].
inline Mat iota(const Rational& re, const Rational& im) {
  Mat m(2, 2);
  m(0, 0) = re;
  m(0, 1) = -im;
  m(1, 0) = im;
  m(1, 1) = re;
  return m;
}

// Blockwise iota: a k x k complex matrix becomes a 2k x 2k real matrix.
// Ring homomorphism: iota_k(EF) = iota_k(E) iota_k(F), iota_k(E^H) = iota_k(E)^T.
inline Mat iota_k(const CMat& e) {
  const int k = e.rows();
  if (e.cols() != k) throw std::invalid_argument("iota_k: not square");
  Mat m(2 * k, 2 * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m.set_block(2 * i, 2 * j, iota(e.re(i, j), e.im(i, j)));
  return m;
}

inline CMat pauli(int which) {
  CMat s(2, 2);
  switch (which) {
    case 1:
      s.re(0, 1) = 1;
      s.re(1, 0) = 1;
      break;
    case 2:
      s.im(0, 1) = -1;
      s.im(1, 0) = 1;
      break;
    case 3:
      s.re(0, 0) = 1;
      s.re(1, 1) = -1;
      break;
    default:
      throw std::invalid_argument("pauli: index must be 1, 2 or 3");
  }
  return s;
}

inline CMat ckron(const CMat& a, const CMat& b) {
  CMat r;
  r.re = kron(a.re, b.re) - kron(a.im, b.im);
  r.im = kron(a.re, b.im) + kron(a.im, b.re);
  return r;
}

// Dirac matrices gamma_0..gamma_3 and gamma_5 = i gamma_0 gamma_1 gamma_2 gamma_3,
// built from the Pauli matrices.
inline std::vector<CMat> dirac_gammas() {
  const CMat s1 = pauli(1), s2 = pauli(2), s3 = pauli(3);
  const CMat i2 = CMat::identity(2);
  std::vector<CMat> g;
  g.push_back(ckron(s3, i2));              // gamma_0
  g.push_back(ckron(s2, s1).times_i());    // gamma_1
  g.push_back(ckron(s2, s2).times_i());    // gamma_2
  g.push_back(ckron(s2, s3).times_i());    // gamma_3
  g.push_back((g[0] * g[1] * g[2] * g[3]).times_i());  // gamma_5
  return g;
}

}  // namespace fkm

#endif

#ifndef FKM_FORMS_HPP
#define FKM_FORMS_HPP

#include <fkm/clifford.hpp>
#include <fkm/matrix.hpp>
#include <fkm/polynomial.hpp>

#include <stdexcept>
#include <utility>
#include <vector>

namespace fkm {

// Monomial vector X over n variables: first the n squares x_i^2, then the
// mixed products x_i x_j for i < j in lexicographic order. Length n(n+1)/2.
inline std::vector<Polynomial::Exponents> monomial_vector_X(int n) {
  std::vector<Polynomial::Exponents> x;
  x.reserve(size_t(n) * (n + 1) / 2);
  Polynomial::Exponents e(n, 0);
  for (int i = 0; i < n; ++i) {
    e[i] = 2;
    x.push_back(e);
    e[i] = 0;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      e[i] = 1;
      e[j] = 1;
      x.push_back(e);
      e[i] = 0;
      e[j] = 0;
    }
  return x;
}

// X position of the monomial x_i x_j, 0 <= i <= j < n.
inline int x_index_of_pair(int n, int i, int j) {
  if (i < 0 || j < i || j >= n) throw std::out_of_range("x_index_of_pair");
  if (i == j) return i;
  // pairs (0,1)..(0,n-1), (1,2)..: offset of (i,j) among i<j pairs
  return n + i * n - i * (i + 1) / 2 + (j - i - 1);
}

// ~X = (x_i x_{l+j})_{0 <= i,j < l}, lexicographic in (i,j). Length l^2,
// over n = 2l variables.
inline std::vector<Polynomial::Exponents> monomial_vector_Xtilde(int l) {
  const int n = 2 * l;
  std::vector<Polynomial::Exponents> x;
  x.reserve(size_t(l) * l);
  Polynomial::Exponents e(n, 0);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      e[i] += 1;
      e[l + j] += 1;
      x.push_back(e);
      e[i] = 0;
      e[l + j] = 0;
    }
  return x;
}

// F = |x|^4 - 2 sum_a <P_a x, x>^2 on R^{2l}.
inline Polynomial build_F(const CliffordSystem& sys) {
  const int n = sys.n();
  Polynomial f = Polynomial::norm_power(n, 2);
  for (const Mat& p : sys.P) {
    Polynomial q = Polynomial::quadratic_form(p);
    f -= rat(2) * (q * q);
  }
  return f;
}

// G_F = (F + |x|^4)/2 = |x|^4 - sum_a <P_a x, x>^2.
inline Polynomial build_GF(const CliffordSystem& sys) {
  const int n = sys.n();
  Polynomial g = Polynomial::norm_power(n, 2);
  for (const Mat& p : sys.P) {
    Polynomial q = Polynomial::quadratic_form(p);
    g -= q * q;
  }
  return g;
}

// z^T Q z expanded over a monomial basis.
inline Polynomial expand_quadratic_in_basis(const Mat& q,
                                            const std::vector<Polynomial::Exponents>& basis) {
  if (!q.is_square() || q.rows() != int(basis.size()))
    throw std::invalid_argument("expand_quadratic_in_basis: DimensionMismatch");
  if (basis.empty()) return Polynomial(0);
  const int n = int(basis[0].size());
  Polynomial r(n);
  Polynomial::Exponents e(n);
  for (int a = 0; a < q.rows(); ++a)
    for (int b = 0; b < q.cols(); ++b) {
      if (q(a, b) == 0) continue;
      for (int i = 0; i < n; ++i) e[i] = basis[a][i] + basis[b][i];
      r.add_term(e, q(a, b));
    }
  return r;
}

// D (all-ones on the squares block) and ~P = sum_a ~P_a ~P_a^T in the X
// ordering, so that X^T D X = |x|^4 and X^T ~P X = sum_a <P_a x, x>^2.
// ~P_a holds coefficient P_ii on x_i^2 and 2 P_ij on x_i x_j (i < j).
inline std::pair<Mat, Mat> build_D_and_Ptilde(const CliffordSystem& sys) {
  const int n = sys.n();
  const int nbar = n * (n + 1) / 2;
  Mat d(nbar, nbar);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = 1;

  Mat pt(nbar, nbar);
  for (const Mat& p : sys.P) {
    std::vector<Rational> v(nbar, Rational(0));
    for (int i = 0; i < n; ++i) v[i] = p(i, i);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) v[x_index_of_pair(n, i, j)] = rat(2) * p(i, j);
    for (int a = 0; a < nbar; ++a) {
      if (v[a] == 0) continue;
      for (int b = 0; b < nbar; ++b)
        if (v[b] != 0) pt(a, b) += v[a] * v[b];
    }
  }
  return {d, pt};
}

// Cartan-Munzner residuals for g = 4:
//   |grad F|^2 - 16 |x|^6  and  Delta F - 8 (m_- - m_+) |x|^2,
// with (m_+, m_-) = (m, l - m - 1). Both must vanish identically.
struct CartanMunznerReport {
  Polynomial grad_residual;
  Polynomial laplace_residual;
  bool ok() const { return grad_residual.is_zero() && laplace_residual.is_zero(); }
};

inline CartanMunznerReport check_cartan_munzner(const CliffordSystem& sys) {
  const int n = sys.n();
  const Polynomial f = build_F(sys);
  CartanMunznerReport rep;
  rep.grad_residual = f.gradient_norm_squared() - rat(16) * Polynomial::norm_power(n, 3);
  const long mdiff = sys.m_minus() - sys.m_plus();
  rep.laplace_residual = f.laplacian() - rat(8 * mdiff) * Polynomial::norm_power(n, 1);
  return rep;
}

}  // namespace fkm

#endif

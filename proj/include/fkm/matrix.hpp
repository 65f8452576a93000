#ifndef FKM_MATRIX_HPP
#define FKM_MATRIX_HPP

#include <fkm/rational.hpp>

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fkm {

// Dense matrix of exact rationals, row-major, 0-based indices.
// Entries stay canonical (lowest terms, positive denominator) because all
// arithmetic goes through mpq and inputs are canonicalized on construction.
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Mat: negative dimension");
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Rational& operator()(int i, int j) {
    check(i, j);
    return a_[size_t(i) * cols_ + j];
  }
  const Rational& operator()(int i, int j) const {
    check(i, j);
    return a_[size_t(i) * cols_ + j];
  }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat operator-() const {
    Mat r = *this;
    for (auto& x : r.a_) x = -x;
    return r;
  }

  Mat& operator+=(const Mat& o) {
    same_shape(o, "+");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    same_shape(o, "-");
    for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }

  friend Mat operator*(const Rational& c, Mat m) {
    for (auto& x : m.a_) x *= c;
    return m;
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Mat*: DimensionMismatch");
    Mat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const Rational& aik = a(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < b.cols_; ++j) {
          const Rational& bkj = b(k, j);
          if (bkj != 0) r(i, j) += aik * bkj;
        }
      }
    return r;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (x != 0) return false;
    return true;
  }
  bool is_square() const { return rows_ == cols_; }
  bool is_symmetric() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }
  bool is_skew_symmetric() const {
    if (!is_square()) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = i; j < cols_; ++j)
        if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
  }
  bool is_identity() const { return is_square() && *this == identity(rows_); }
  bool is_orthogonal() const {
    return is_square() && transpose() * (*this) == identity(rows_);
  }

  std::vector<Rational> row(int i) const {
    std::vector<Rational> r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }
  std::vector<Rational> col(int j) const {
    std::vector<Rational> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  Mat block(int i0, int j0, int h, int w) const {
    Mat b(h, w);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < w; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
    return b;
  }
  void set_block(int i0, int j0, const Mat& b) {
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
  }

  // Text format: first line "rows cols", then one whitespace-separated line
  // per row; each token is an integer or "p/q". Round trips bit-exactly.
  void write_text(std::ostream& os) const {
    os << rows_ << ' ' << cols_ << '\n';
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) {
        if (j) os << ' ';
        os << rational_to_string((*this)(i, j));
      }
      os << '\n';
    }
  }

  static Mat read_text(std::istream& is) {
    int r = 0, c = 0;
    if (!(is >> r >> c)) throw std::invalid_argument("Mat::read_text: bad header");
    if (r < 0 || c < 0) throw std::invalid_argument("Mat::read_text: bad dimensions");
    Mat m(r, c);
    std::string tok;
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) {
        if (!(is >> tok)) throw std::invalid_argument("Mat::read_text: truncated input");
        m(i, j) = parse_rational(tok);
      }
    return m;
  }

  std::string to_text() const {
    std::ostringstream os;
    write_text(os);
    return os.str();
  }
  static Mat from_text(const std::string& s) {
    std::istringstream is(s);
    return read_text(is);
  }

 private:
  void check(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw std::out_of_range("Mat: index out of range");
  }
  void same_shape(const Mat& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw std::invalid_argument(std::string("Mat") + op + ": DimensionMismatch");
  }

  int rows_, cols_;
  std::vector<Rational> a_;
};

inline Mat kron(const Mat& a, const Mat& b) {
  Mat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Rational& aij = a(i, j);
      if (aij == 0) continue;
      for (int p = 0; p < b.rows(); ++p)
        for (int q = 0; q < b.cols(); ++q) {
          const Rational& bpq = b(p, q);
          if (bpq != 0) r(i * b.rows() + p, j * b.cols() + q) = aij * bpq;
        }
    }
  return r;
}

// Direct sum diag(a, b).
inline Mat dsum(const Mat& a, const Mat& b) {
  Mat r(a.rows() + b.rows(), a.cols() + b.cols());
  r.set_block(0, 0, a);
  r.set_block(a.rows(), a.cols(), b);
  return r;
}

// Grid of equal square blocks -> flat matrix. Row-block index first.
inline Mat assemble_blocks(const std::vector<std::vector<Mat>>& grid) {
  if (grid.empty() || grid[0].empty())
    throw std::invalid_argument("assemble_blocks: empty grid");
  const int gr = int(grid.size()), gc = int(grid[0].size());
  const int s = grid[0][0].rows();
  for (const auto& row : grid) {
    if (int(row.size()) != gc)
      throw std::invalid_argument("assemble_blocks: DimensionMismatch (ragged grid)");
    for (const auto& blk : row)
      if (blk.rows() != s || blk.cols() != s)
        throw std::invalid_argument("assemble_blocks: DimensionMismatch (block size)");
  }
  Mat m(gr * s, gc * s);
  for (int i = 0; i < gr; ++i)
    for (int j = 0; j < gc; ++j) m.set_block(i * s, j * s, grid[i][j]);
  return m;
}

inline std::vector<std::vector<Mat>> split_blocks(const Mat& m, int s) {
  if (s <= 0 || m.rows() % s != 0 || m.cols() % s != 0)
    throw std::invalid_argument("split_blocks: DimensionMismatch");
  const int gr = m.rows() / s, gc = m.cols() / s;
  std::vector<std::vector<Mat>> grid(gr, std::vector<Mat>(gc));
  for (int i = 0; i < gr; ++i)
    for (int j = 0; j < gc; ++j) grid[i][j] = m.block(i * s, j * s, s, s);
  return grid;
}

// Exact rank over Q. Fraction-free (Bareiss) elimination on a row-scaled
// integer copy; division by the previous pivot is exact by Sylvester's
// identity, which also keeps intermediate entries at minor size.
inline int rank(const Mat& m) {
  const int nr = m.rows(), nc = m.cols();
  if (nr == 0 || nc == 0) return 0;
  std::vector<std::vector<Int>> a(nr, std::vector<Int>(nc));
  for (int i = 0; i < nr; ++i) {
    Int lcm = 1;
    for (int j = 0; j < nc; ++j) {
      const Int& d = m(i, j).get_den();
      Int g;
      mpz_gcd(g.get_mpz_t(), lcm.get_mpz_t(), d.get_mpz_t());
      lcm = lcm / g * d;
    }
    for (int j = 0; j < nc; ++j)
      a[i][j] = m(i, j).get_num() * (lcm / m(i, j).get_den());
  }

  Int prev = 1;
  int r = 0;
  for (int c = 0; c < nc && r < nr; ++c) {
    int piv = -1;
    for (int i = r; i < nr; ++i)
      if (a[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    for (int i = r + 1; i < nr; ++i) {
      for (int j = c + 1; j < nc; ++j) {
        Int num = a[i][j] * a[r][c] - a[i][c] * a[r][j];
        Int q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
        if (rem != 0) throw std::logic_error("rank: inexact Bareiss division");
        a[i][j] = q;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

enum class PsdVerdict { PSD, NotPSD };

// Exact PSD certificate. PSD: M = L D L^T with unit lower L and D >= 0
// entrywise (zeros where a pivot was skipped). NotPSD: witness u with
// u^T M u = witness_value < 0.
struct PsdCertificate {
  PsdVerdict verdict = PsdVerdict::NotPSD;
  Mat L;
  std::vector<Rational> D;
  std::vector<Rational> witness;
  Rational witness_value;

  bool is_psd() const { return verdict == PsdVerdict::PSD; }
  int positive_pivots() const {
    int k = 0;
    for (const auto& d : D)
      if (d > 0) ++k;
    return k;
  }
  Mat reconstruct() const {
    const int n = L.rows();
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = D[i];
    return L * d * L.transpose();
  }
};

// Symmetric elimination with diagonal pivots in natural order, skip on zero.
// A negative pivot, or a zero pivot with a nonzero residual row, yields an
// exact witness via back substitution through the partial factor.
inline PsdCertificate ldl_psd(const Mat& m) {
  if (!m.is_square()) throw std::invalid_argument("ldl_psd: NotSymmetric (not square)");
  if (!m.is_symmetric()) throw std::invalid_argument("ldl_psd: NotSymmetric");
  const int n = m.rows();
  Mat s = m;
  Mat l = Mat::identity(n);
  std::vector<Rational> d(n, Rational(0));

  auto witness_from = [&](const std::vector<Rational>& e) {
    // Solve L^T u = e; unit upper triangular back substitution.
    std::vector<Rational> u(n, Rational(0));
    for (int i = n - 1; i >= 0; --i) {
      Rational acc = e[i];
      for (int j = i + 1; j < n; ++j)
        if (l(j, i) != 0 && u[j] != 0) acc -= l(j, i) * u[j];
      u[i] = acc;
    }
    return u;
  };

  for (int t = 0; t < n; ++t) {
    const Rational piv = s(t, t);
    if (piv < 0) {
      std::vector<Rational> e(n, Rational(0));
      e[t] = 1;
      PsdCertificate c;
      c.verdict = PsdVerdict::NotPSD;
      c.witness = witness_from(e);
      c.witness_value = piv;
      return c;
    }
    if (piv == 0) {
      int bad = -1;
      for (int j = t + 1; j < n; ++j)
        if (s(t, j) != 0) {
          bad = j;
          break;
        }
      if (bad >= 0) {
        // 2x2 Schur block [[0, v],[v, c]] is indefinite; x chosen so the
        // quadratic form evaluates to exactly -1.
        const Rational v = s(t, bad), c0 = s(bad, bad);
        std::vector<Rational> e(n, Rational(0));
        e[t] = -(c0 + 1) / (2 * v);
        e[bad] = 1;
        PsdCertificate c;
        c.verdict = PsdVerdict::NotPSD;
        c.witness = witness_from(e);
        c.witness_value = -1;
        return c;
      }
      continue;  // skipped pivot: D[t] = 0, L column t stays e_t
    }
    d[t] = piv;
    for (int i = t + 1; i < n; ++i) l(i, t) = s(i, t) / piv;
    for (int i = t + 1; i < n; ++i) {
      if (s(i, t) == 0) continue;
      const Rational f = l(i, t);
      for (int j = t + 1; j < n; ++j)
        if (s(t, j) != 0) s(i, j) -= f * s(t, j);
    }
    for (int j = t; j < n; ++j) {
      s(t, j) = 0;
      s(j, t) = 0;
    }
  }

  PsdCertificate c;
  c.verdict = PsdVerdict::PSD;
  c.L = l;
  c.D = d;
  return c;
}

inline Rational quadratic_value(const Mat& m, const std::vector<Rational>& u) {
  if (int(u.size()) != m.rows() || !m.is_square())
    throw std::invalid_argument("quadratic_value: DimensionMismatch");
  Rational acc = 0;
  for (int i = 0; i < m.rows(); ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < m.cols(); ++j)
      if (u[j] != 0) acc += u[i] * m(i, j) * u[j];
  }
  return acc;
}

}  // namespace fkm

#endif

#ifndef FKM_PROBE_HPP
#define FKM_PROBE_HPP

#include <fkm/clifford.hpp>
#include <fkm/matrix.hpp>
#include <fkm/sdpcert.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkm {

// Plain dense double matrix for the numerical cross-check. Never accepts
// NaN/Inf.
class FMat {
 public:
  FMat() : rows_(0), cols_(0) {}
  FMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols, 0.0) {}

  static FMat identity(int n) {
    FMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  bool all_finite() const {
    for (double x : a_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  FMat transpose() const {
    FMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend FMat operator*(const FMat& a, const FMat& b) {
    FMat r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
      }
    return r;
  }
  friend FMat operator-(const FMat& a, const FMat& b) {
    FMat r(a.rows_, a.cols_);
    for (size_t t = 0; t < r.a_.size(); ++t) r.a_[t] = a.a_[t] - b.a_[t];
    return r;
  }
  friend FMat operator+(const FMat& a, const FMat& b) {
    FMat r(a.rows_, a.cols_);
    for (size_t t = 0; t < r.a_.size(); ++t) r.a_[t] = a.a_[t] + b.a_[t];
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::fabs(x));
    return m;
  }
  double frobenius() const {
    double s = 0.0;
    for (double x : a_) s += x * x;
    return std::sqrt(s);
  }

 private:
  int rows_, cols_;
  std::vector<double> a_;
};

inline FMat to_float(const Mat& m) {
  FMat f(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) f(i, j) = mpq_get_d(m(i, j).get_mpq_t());
  return f;
}

struct JacobiResult {
  std::vector<double> eigenvalues;  // ascending
  FMat vectors;                     // columns are the eigenvectors
};

// Cyclic Jacobi with a threshold schedule. Stops when the off-diagonal
// Frobenius norm falls below tol * max(1, ||S||_F); reconstruction error is
// well under 1e-9 * ||S||_inf at the sizes used here (<= ~150).
inline JacobiResult jacobi_eigen(const FMat& s, double tol = 1e-12) {
  const int n = s.rows();
  if (s.cols() != n) throw std::invalid_argument("jacobi_eigen: NotSymmetric (not square)");
  if (!s.all_finite()) throw std::invalid_argument("jacobi_eigen: NotFinite");
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) asym = std::max(asym, std::fabs(s(i, j) - s(j, i)));
  if (asym > 1e-12 * std::max(1.0, s.max_abs()))
    throw std::invalid_argument("jacobi_eigen: NotSymmetric");

  FMat a = s;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  FMat v = FMat::identity(n);
  const double scale = std::max(1.0, a.frobenius());

  auto off = [&]() {
    double t = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) t += a(i, j) * a(i, j);
    return std::sqrt(t);
  };

  for (int sweep = 0; sweep < 200 && off() > tol * scale; ++sweep) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::fabs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
  }

  JacobiResult r;
  r.eigenvalues.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a(i, i);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] < diag[y]; });
  r.vectors = FMat(n, n);
  for (int c = 0; c < n; ++c) {
    r.eigenvalues[c] = diag[order[c]];
    for (int k = 0; k < n; ++k) r.vectors(k, c) = v(k, order[c]);
  }
  return r;
}

// Nearest PSD matrix: clamp negative eigenvalues to zero.
inline FMat project_psd(const FMat& s) {
  if (!s.all_finite()) throw std::invalid_argument("project_psd: NotFinite");
  const int n = s.rows();
  FMat sym(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sym(i, j) = 0.5 * (s(i, j) + s(j, i));
  JacobiResult e = jacobi_eigen(sym);
  FMat r(n, n);
  for (int k = 0; k < n; ++k) {
    const double lam = std::max(0.0, e.eigenvalues[k]);
    if (lam == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      const double vli = lam * e.vectors(i, k);
      for (int j = 0; j < n; ++j) r(i, j) += vli * e.vectors(j, k);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (r(i, j) + r(j, i));
      r(i, j) = v;
      r(j, i) = v;
    }
  return r;
}

namespace probe_detail {

// Pattern set: B_ii = I, off-diagonal pairs (B_ij, B_ji) = (K, -K) with K
// skew. Orthogonal projection, blockwise closed form.
inline FMat project_pattern(const FMat& b, int l) {
  FMat r(l * l, l * l);
  for (int i = 0; i < l; ++i)
    for (int t = 0; t < l; ++t) r(i * l + t, i * l + t) = 1.0;
  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j)
      for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q) {
          // K = skew part of (B_ij - B_ji)/2
          const double w = 0.25 * (b(i * l + p, j * l + q) - b(j * l + p, i * l + q) -
                                   b(i * l + q, j * l + p) + b(j * l + q, i * l + p));
          r(i * l + p, j * l + q) = w;
          r(j * l + q, i * l + p) = w;
          r(j * l + p, i * l + q) = -w;
          r(i * l + q, j * l + p) = -w;
        }
  return r;
}

// Equation set: R_i B_ij = R_j for every block. Per-block orthogonal
// projection M -> M - R_i^T (R_i M - R_j), valid because R_i R_i^T = I_m.
inline FMat project_equation(const FMat& b, const std::vector<FMat>& rf, int l, int m) {
  FMat r = b;
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      // V = R_i * B_ij - R_j
      FMat v(m, l);
      for (int a = 0; a < m; ++a)
        for (int q = 0; q < l; ++q) {
          double acc = -rf[j](a, q);
          for (int t = 0; t < l; ++t) acc += rf[i](a, t) * b(i * l + t, j * l + q);
          v(a, q) = acc;
        }
      for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q) {
          double acc = 0.0;
          for (int a = 0; a < m; ++a) acc += rf[i](a, p) * v(a, q);
          r(i * l + p, j * l + q) -= acc;
        }
    }
  return r;
}

struct Residuals {
  double affine = 0.0;  // max violation over pattern + equation families
  double cone = 0.0;    // |most negative eigenvalue| of the symmetric part
};

inline double affine_residual(const FMat& b, const std::vector<FMat>& rf, int l, int m) {
  double res = 0.0;
  for (int i = 0; i < l; ++i)
    for (int t = 0; t < l; ++t)
      for (int h = 0; h < l; ++h)
        res = std::max(res, std::fabs(b(i * l + t, i * l + h) - (t == h ? 1.0 : 0.0)));
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q) {
          res = std::max(res, std::fabs(b(i * l + p, j * l + q) + b(i * l + q, j * l + p)));
          res = std::max(res, std::fabs(b(i * l + p, j * l + q) + b(j * l + p, i * l + q)));
        }
    }
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j)
      for (int a = 0; a < m; ++a)
        for (int q = 0; q < l; ++q) {
          double acc = -rf[j](a, q);
          for (int t = 0; t < l; ++t) acc += rf[i](a, t) * b(i * l + t, j * l + q);
          res = std::max(res, std::fabs(acc));
        }
  return res;
}

// Pseudoinverse via Jacobi; eigenvalues below cut are treated as zero.
inline FMat pseudo_inverse(const FMat& g) {
  JacobiResult e = jacobi_eigen(g);
  const int n = g.rows();
  double lmax = 0.0;
  for (double x : e.eigenvalues) lmax = std::max(lmax, std::fabs(x));
  const double cut = std::max(1e-10 * lmax, 1e-300);
  FMat r(n, n);
  for (int k = 0; k < n; ++k) {
    if (std::fabs(e.eigenvalues[k]) <= cut) continue;
    const double inv = 1.0 / e.eigenvalues[k];
    for (int i = 0; i < n; ++i) {
      const double vik = inv * e.vectors(i, k);
      for (int j = 0; j < n; ++j) r(i, j) += vik * e.vectors(j, k);
    }
  }
  return r;
}

}  // namespace probe_detail

// Orthogonal projection onto the full affine constraint set of the block SDP:
// pattern (B_ii = I, skew-paired off-diagonal blocks) and equations
// (R_i B_ij = R_j) jointly. Per pair (i < j) the candidate block K is skew
// with R_i K = R_j and R_j K = -R_i; the projection is solved by least
// squares over the skew parameterization. Being a projection onto an affine
// set, it is idempotent.
inline FMat project_affine(const FMat& b, const RMatrix& r) {
  const int l = r.l, m = r.m;
  if (b.rows() != l * l || b.cols() != l * l)
    throw std::invalid_argument("project_affine: DimensionMismatch");
  if (!b.all_finite()) throw std::invalid_argument("project_affine: NotFinite");
  std::vector<FMat> rf;
  rf.reserve(l);
  for (const Mat& rq : r.R) rf.push_back(to_float(rq));

  FMat out(l * l, l * l);
  for (int i = 0; i < l; ++i)
    for (int t = 0; t < l; ++t) out(i * l + t, i * l + t) = 1.0;

  const int nvar = l * (l - 1) / 2;  // strict lower triangle of a skew K
  std::vector<std::pair<int, int>> vars;
  vars.reserve(nvar);
  for (int p = 0; p < l; ++p)
    for (int q = p + 1; q < l; ++q) vars.emplace_back(p, q);
  auto kval = [&](const std::vector<double>& x, int p, int q) -> double {
    if (p == q) return 0.0;
    for (int t = 0; t < nvar; ++t) {
      if (vars[t].first == std::min(p, q) && vars[t].second == std::max(p, q))
        return p < q ? x[t] : -x[t];
    }
    return 0.0;
  };

  for (int i = 0; i < l; ++i)
    for (int j = i + 1; j < l; ++j) {
      // target: skew part of (B_ij - B_ji)/2
      std::vector<double> x0(nvar);
      for (int t = 0; t < nvar; ++t) {
        const auto [p, q] = vars[t];
        x0[t] = 0.25 * (b(i * l + p, j * l + q) - b(j * l + p, i * l + q) -
                        b(i * l + q, j * l + p) + b(j * l + q, i * l + p));
      }
      // constraints: R_i K = R_j and R_j K = -R_i, rows indexed (a, q).
      const int ncon = 2 * m * l;
      FMat c(ncon, nvar);
      std::vector<double> d(ncon, 0.0);
      int row = 0;
      for (int a = 0; a < m; ++a)
        for (int q = 0; q < l; ++q, ++row) {
          for (int t = 0; t < nvar; ++t) {
            const auto [u, w] = vars[t];
            double coeff = 0.0;
            if (w == q) coeff += rf[i](a, u);       // K(u, q) = +x
            if (u == q) coeff -= rf[i](a, w);       // K(w, q) = -x
            c(row, t) = coeff;
          }
          d[row] = rf[j](a, q);
        }
      for (int a = 0; a < m; ++a)
        for (int q = 0; q < l; ++q, ++row) {
          for (int t = 0; t < nvar; ++t) {
            const auto [u, w] = vars[t];
            double coeff = 0.0;
            if (w == q) coeff += rf[j](a, u);
            if (u == q) coeff -= rf[j](a, w);
            c(row, t) = coeff;
          }
          d[row] = -rf[i](a, q);
        }
      // x* = x0 - C^T (C C^T)^+ (C x0 - d)
      FMat g = c * c.transpose();
      FMat gp = probe_detail::pseudo_inverse(g);
      std::vector<double> resid(ncon, 0.0);
      for (int rr = 0; rr < ncon; ++rr) {
        double acc = -d[rr];
        for (int t = 0; t < nvar; ++t) acc += c(rr, t) * x0[t];
        resid[rr] = acc;
      }
      std::vector<double> lam(ncon, 0.0);
      for (int rr = 0; rr < ncon; ++rr) {
        double acc = 0.0;
        for (int ss = 0; ss < ncon; ++ss) acc += gp(rr, ss) * resid[ss];
        lam[rr] = acc;
      }
      std::vector<double> x(nvar);
      for (int t = 0; t < nvar; ++t) {
        double acc = x0[t];
        for (int rr = 0; rr < ncon; ++rr) acc -= c(rr, t) * lam[rr];
        x[t] = acc;
      }
      for (int p = 0; p < l; ++p)
        for (int q = 0; q < l; ++q) {
          const double kpq = kval(x, p, q);
          out(i * l + p, j * l + q) = kpq;
          out(j * l + q, i * l + p) = kpq;
        }
    }
  return out;
}

struct ProbeReport {
  int iterations = 0;
  double affine_residual = 0.0;
  double cone_residual = 0.0;
  enum class Verdict { Converged, Stalled, BudgetExhausted } verdict = Verdict::BudgetExhausted;
  struct HistoryEntry {
    int iteration;
    double affine;
    double cone;
  };
  std::vector<HistoryEntry> history;
  FMat final_iterate;

  const char* verdict_name() const {
    switch (verdict) {
      case Verdict::Converged: return "converged";
      case Verdict::Stalled: return "stalled";
      case Verdict::BudgetExhausted: return "budget-exhausted";
    }
    return "?";
  }
};

// Dykstra-corrected cyclic projections among {pattern set, equation set,
// PSD cone}, from the identity-block start. Purely numerical: a converged
// run corroborates feasibility, a stalled run is an empirical flag only and
// never overrides the exact modules.
inline ProbeReport feasibility_probe(int m, int l, SystemClass cls = SystemClass::Unique,
                                     int max_iters = 10000, double tol = 1e-7,
                                     double stall_threshold = 1e-3) {
  const CliffordSystem sys = build_system(m, l, cls);
  const RMatrix r = build_R(sys);
  std::vector<FMat> rf;
  rf.reserve(l);
  for (const Mat& rq : r.R) rf.push_back(to_float(rq));

  const int n = l * l;
  FMat x = FMat::identity(n);
  FMat inc1(n, n), inc2(n, n), inc3(n, n);  // Dykstra corrections per set

  ProbeReport rep;
  for (int it = 1; it <= max_iters; ++it) {
    FMat y1 = probe_detail::project_pattern(x + inc1, l);
    inc1 = (x + inc1) - y1;
    FMat y2 = probe_detail::project_equation(y1 + inc2, rf, l, m);
    inc2 = (y1 + inc2) - y2;
    FMat y3 = project_psd(y2 + inc3);
    inc3 = (y2 + inc3) - y3;
    x = y3;

    const double aff = probe_detail::affine_residual(x, rf, l, m);
    // x is PSD by construction; measure the cone residual on the affine
    // side of the cycle instead (how far the affine iterate is from PSD).
    JacobiResult e = jacobi_eigen(y2);
    const double cone = e.eigenvalues.empty() ? 0.0 : std::max(0.0, -e.eigenvalues.front());
    rep.iterations = it;
    rep.affine_residual = aff;
    rep.cone_residual = cone;
    if (it % 100 == 0 || it == 1) rep.history.push_back({it, aff, cone});
    if (aff < tol && cone < tol) {
      rep.verdict = ProbeReport::Verdict::Converged;
      rep.final_iterate = x;
      if (rep.history.empty() || rep.history.back().iteration != it)
        rep.history.push_back({it, aff, cone});
      return rep;
    }
  }
  const double worst = std::max(rep.affine_residual, rep.cone_residual);
  rep.verdict = worst > stall_threshold ? ProbeReport::Verdict::Stalled
                                        : ProbeReport::Verdict::BudgetExhausted;
  rep.final_iterate = x;
  if (rep.history.empty() || rep.history.back().iteration != rep.iterations)
    rep.history.push_back({rep.iterations, rep.affine_residual, rep.cone_residual});
  return rep;
}

}  // namespace fkm

#endif

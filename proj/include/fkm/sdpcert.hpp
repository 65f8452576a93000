#ifndef FKM_SDPCERT_HPP
#define FKM_SDPCERT_HPP

#include <fkm/clifford.hpp>
#include <fkm/forms.hpp>
#include <fkm/matrix.hpp>
#include <fkm/polynomial.hpp>

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fkm {

// tau_k: negate row k and column k (0-based). Involution, commutes with
// transposition.
inline Mat tau(int k, const Mat& e) {
  if (k < 0 || k >= e.rows() || k >= e.cols()) throw std::out_of_range("tau: IndexOutOfRange");
  Mat r = e;
  for (int j = 0; j < r.cols(); ++j) r(k, j) = -r(k, j);
  for (int i = 0; i < r.rows(); ++i) r(i, k) = -r(i, k);
  return r;
}

// R_q stacks the q-th rows of E_0, ..., E_{m-1} (m x l); R = (R_0, ..., R_{l-1})
// is m x l^2 with column (i, j) at i*l + j. Each R_q has orthonormal rows:
// R_q R_q^T = I_m.
struct RMatrix {
  int m = 0;
  int l = 0;
  std::vector<Mat> R;  // R_0..R_{l-1}, each m x l

  Mat flat() const {
    Mat f(m, l * l);
    for (int q = 0; q < l; ++q)
      for (int a = 0; a < m; ++a)
        for (int j = 0; j < l; ++j) f(a, q * l + j) = R[q](a, j);
    return f;
  }
};

inline RMatrix build_R(const CliffordSystem& sys) {
  RMatrix r;
  r.m = sys.m;
  r.l = sys.l;
  r.R.reserve(sys.l);
  for (int q = 0; q < sys.l; ++q) {
    Mat rq(sys.m, sys.l);
    for (int a = 0; a < sys.m; ++a) {
      const Mat e = sys.e_mat(a);
      for (int j = 0; j < sys.l; ++j) rq(a, j) = e(q, j);
    }
    r.R.push_back(rq);
  }
  for (int q = 0; q < sys.l; ++q)
    if (r.R[q] * r.R[q].transpose() != Mat::identity(sys.m))
      throw std::logic_error("build_R: R_q R_q^T != I");
  return r;
}

// First m' rows of each R_q. Feasibility of any B is preserved under this
// restriction.
inline RMatrix restrict_R(const RMatrix& r, int m_prime) {
  if (m_prime < 1 || m_prime >= r.m) throw std::invalid_argument("restrict_R: BadRange");
  RMatrix s;
  s.m = m_prime;
  s.l = r.l;
  for (const Mat& rq : r.R) s.R.push_back(rq.block(0, 0, m_prime, r.l));
  return s;
}

struct FeasibilityViolation {
  std::string condition;
  std::string detail;
};

struct FeasibilityReport {
  bool feasible = false;
  std::vector<FeasibilityViolation> violations;
  std::optional<PsdCertificate> psd;  // present once the shape checks pass

  std::string summary() const {
    if (feasible) return "feasible";
    std::ostringstream os;
    os << "infeasible (" << violations.size() << " violation(s))";
    for (const auto& v : violations) os << "\n  " << v.condition << ": " << v.detail;
    return os.str();
  }
};

// A verified feasible solution of the block SDP for some R.
struct FeasibleB {
  int l = 0;
  Mat B;                   // l^2 x l^2
  std::string provenance;  // B1 | B2 | B6 | external
  PsdCertificate psd;
};

namespace detail {
inline std::string idx2(int a, int b) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
}
}  // namespace detail

// Full condition list: block shape, B_ii = I, skew off-diagonal blocks,
// R_i B_ij = R_j, exact PSD, plus the derived entry conditions
// b_{ii,kh} = delta_{kh} and b_{ij,kh} = -b_{ji,kh}. Every failed condition
// is reported with indices and both sides.
inline FeasibilityReport check_feasible(const Mat& b, const RMatrix& r) {
  FeasibilityReport rep;
  const int l = r.l;
  if (b.rows() != l * l || b.cols() != l * l) {
    rep.violations.push_back({"shape", "matrix is " + std::to_string(b.rows()) + "x" +
                                           std::to_string(b.cols()) + ", expected " +
                                           std::to_string(l * l) + " square"});
    return rep;
  }
  auto grid = split_blocks(b, l);

  if (!b.is_symmetric()) rep.violations.push_back({"symmetry", "B != B^T"});
  for (int i = 0; i < l; ++i)
    if (!grid[i][i].is_identity())
      rep.violations.push_back({"diagonal-block", "B_" + detail::idx2(i, i) + " != I"});
  for (int i = 0; i < l; ++i)
    for (int k = i + 1; k < l; ++k)
      if (!grid[i][k].is_skew_symmetric())
        rep.violations.push_back(
            {"skew-block", "B_" + detail::idx2(i, k) + " is not skew-symmetric"});

  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      const Mat lhs = r.R[i] * grid[i][j];
      if (lhs != r.R[j]) {
        std::ostringstream os;
        os << "R_" << i + 1 << " B_" << detail::idx2(i, j) << " != R_" << j + 1;
        rep.violations.push_back({"linear", os.str()});
      }
    }

  // Entry conditions that the block conditions force (the closing argument
  // of the SDP characterization); checking both certifies the assembly.
  for (int i = 0; i < l; ++i)
    for (int k = 0; k < l; ++k)
      for (int h = 0; h < l; ++h) {
        const Rational want = (k == h) ? 1 : 0;
        if (grid[i][k](i, h) != want)
          rep.violations.push_back({"entry-b_iikh", "b_{" + detail::idx2(i, i) + "," +
                                                        detail::idx2(k, h) + "} = " +
                                                        rational_to_string(grid[i][k](i, h)) +
                                                        ", expected " + rational_to_string(want)});
      }
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      for (int k = 0; k < l; ++k)
        for (int h = 0; h < l; ++h)
          if (grid[i][k](j, h) != -grid[j][k](i, h)) {
            rep.violations.push_back(
                {"entry-b_ji", "b_{" + detail::idx2(i, j) + "," + detail::idx2(k, h) +
                                   "} != -b_{" + detail::idx2(j, i) + "," + detail::idx2(k, h) +
                                   "}: " + rational_to_string(grid[i][k](j, h)) + " vs " +
                                   rational_to_string(-grid[j][k](i, h))});
            if (rep.violations.size() > 64) return rep;  // enough evidence
          }
    }

  if (b.is_symmetric()) {
    rep.psd = ldl_psd(b);
    if (!rep.psd->is_psd())
      rep.violations.push_back(
          {"psd", "u^T B u = " + rational_to_string(rep.psd->witness_value) + " < 0"});
  }

  rep.feasible = rep.violations.empty();
  return rep;
}

namespace detail {
inline FeasibleB certify(Mat b, const RMatrix& r, const std::string& provenance) {
  FeasibilityReport rep = check_feasible(b, r);
  if (!rep.feasible)
    throw std::logic_error("construction " + provenance + " failed its own feasibility check: " +
                           rep.summary());
  FeasibleB f;
  f.l = r.l;
  f.B = std::move(b);
  f.provenance = provenance;
  f.psd = *rep.psd;
  return f;
}
}  // namespace detail

// B(1,l): B_ii = I, B_ij = E_ij - E_ji (matrix units). Feasible for R(1,l),
// rank l(l-1)/2 + 1.
inline FeasibleB build_B1(int l) {
  if (l < 3) throw std::invalid_argument("build_B1: need l >= 3");
  std::vector<std::vector<Mat>> grid(l, std::vector<Mat>(l, Mat(l, l)));
  for (int i = 0; i < l; ++i) {
    grid[i][i] = Mat::identity(l);
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      Mat u(l, l);
      u(i, j) = 1;
      u(j, i) = -1;
      grid[i][j] = u;
    }
  }
  return detail::certify(assemble_blocks(grid), build_R(build_system(1, l)), "B1");
}

// B(2,l) for even l = 2k+2: B_ii = I, B_{2s-1,2s} = -tau_{2s}(E_1), and the
// 2x2 block-of-blocks pattern
//   [ (E_sh - E_hs) (x) I_2     -(E_sh + E_hs) (x) iota(i) ]
//   [ (E_sh + E_hs) (x) iota(i)  (E_sh - E_hs) (x) I_2     ]
// over pair indices s != h. Feasible for R(2,l), rank l(l-2)/4 + 2.
inline FeasibleB build_B2(int l) {
  if (l < 4 || l % 2 != 0) throw std::invalid_argument("build_B2: OddDimension (need even l >= 4)");
  const int kp1 = l / 2;  // k + 1 pair indices
  const CliffordSystem sys = build_system(2, l);
  const Mat e1 = sys.E[0];
  const Mat j2 = iota(0, 1);
  const Mat i2 = Mat::identity(2);

  std::vector<std::vector<Mat>> grid(l, std::vector<Mat>(l, Mat(l, l)));
  for (int i = 0; i < l; ++i) grid[i][i] = Mat::identity(l);
  for (int s = 0; s < kp1; ++s) {
    const Mat b = -tau(2 * s + 1, e1);
    grid[2 * s][2 * s + 1] = b;
    grid[2 * s + 1][2 * s] = -b;
  }
  for (int s = 0; s < kp1; ++s)
    for (int h = 0; h < kp1; ++h) {
      if (s == h) continue;
      Mat esh(kp1, kp1), diff(kp1, kp1), sum(kp1, kp1);
      diff(s, h) = 1;
      diff(h, s) = -1;
      sum(s, h) = 1;
      sum(h, s) = 1;
      grid[2 * s][2 * h] = kron(diff, i2);
      grid[2 * s][2 * h + 1] = -kron(sum, j2);
      grid[2 * s + 1][2 * h] = kron(sum, j2);
      grid[2 * s + 1][2 * h + 1] = kron(diff, i2);
    }
  return detail::certify(assemble_blocks(grid), build_R(sys), "B2");
}

// V^(6) = (I_8, tau_1(E_1), tau_5(E_6), tau_5(E_7), -tau_1(E_4), tau_1(E_5),
// -tau_1(E_2), -tau_1(E_3)) with E_6 = E_2 E_4, E_7 = E_3 E_4;
// B^(6) = (V^(6))^T V^(6), 64 x 64, rank 8. Feasible for R^(m), m = 3..6.
inline Mat b6_first_block_row() {
  const auto e = dirac_e_family();  // E_1..E_5 on R^8
  const Mat e6 = e[1] * e[3];
  const Mat e7 = e[2] * e[3];
  Mat v(8, 64);
  v.set_block(0, 0, Mat::identity(8));
  v.set_block(0, 8, tau(0, e[0]));
  v.set_block(0, 16, tau(4, e6));
  v.set_block(0, 24, tau(4, e7));
  v.set_block(0, 32, -tau(0, e[3]));
  v.set_block(0, 40, tau(0, e[4]));
  v.set_block(0, 48, -tau(0, e[1]));
  v.set_block(0, 56, -tau(0, e[2]));
  return v;
}

inline FeasibleB build_B6() {
  const Mat v = b6_first_block_row();
  return detail::certify(v.transpose() * v, build_R(build_system(6, 8)), "B6");
}

// Gram matrix of G_F over X from a feasible B: 4 (B - R^T R) placed on the
// principal submatrix of mixed monomials x_i x_{l+j}; zero elsewhere.
// Then X^T Q X = G_F and rank(Q) = rank(B) - m.
inline Mat gram_from_B(const Mat& b, const RMatrix& r) {
  const int l = r.l, n = 2 * l;
  if (b.rows() != l * l || b.cols() != l * l)
    throw std::invalid_argument("gram_from_B: InfeasibleInput (wrong size)");
  const Mat rf = r.flat();
  const Mat m = b - rf.transpose() * rf;
  const int nbar = n * (n + 1) / 2;
  Mat q(nbar, nbar);
  std::vector<int> mix(l * l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) mix[i * l + j] = x_index_of_pair(n, i, l + j);
  for (int a = 0; a < l * l; ++a)
    for (int c = 0; c < l * l; ++c)
      if (m(a, c) != 0) q(mix[a], mix[c]) = rat(4) * m(a, c);
  return q;
}

// One sos representation: G_F = sum_j weight_j (row_j . ~X)^2 with positive
// rational weights and linearly independent rows; rank = number of items.
struct SosCertificate {
  int n = 0;
  int l = 0;
  int m = 0;
  int rank = 0;
  struct Item {
    Rational weight;
    std::vector<Rational> row;  // coefficients over ~X, length l^2
  };
  std::vector<Item> items;

  // Certificate file: header line "n l m rank", then one line per item
  // "weight : c_1 ... c_{l^2}".
  void write_text(std::ostream& os) const {
    os << n << ' ' << l << ' ' << m << ' ' << rank << '\n';
    for (const auto& it : items) {
      os << rational_to_string(it.weight) << " :";
      for (const auto& c : it.row) os << ' ' << rational_to_string(c);
      os << '\n';
    }
  }

  static SosCertificate read_text(std::istream& is) {
    SosCertificate c;
    if (!(is >> c.n >> c.l >> c.m >> c.rank))
      throw std::invalid_argument("SosCertificate::read_text: bad header");
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string wtok, colon;
      if (!(ls >> wtok >> colon) || colon != ":")
        throw std::invalid_argument("SosCertificate::read_text: bad item line");
      Item it;
      it.weight = parse_rational(wtok);
      std::string tok;
      while (ls >> tok) it.row.push_back(parse_rational(tok));
      if (int(it.row.size()) != c.l * c.l)
        throw std::invalid_argument("SosCertificate::read_text: row length != l^2");
      c.items.push_back(std::move(it));
    }
    return c;
  }

  std::string to_text() const {
    std::ostringstream os;
    write_text(os);
    return os.str();
  }
  static SosCertificate from_text(const std::string& s) {
    std::istringstream is(s);
    return read_text(is);
  }
};

// LDL^T of B - R^T R turns a feasible B into an explicit representation
// G_F = sum_j (4 d_j) (L-col_j . ~X)^2. Rank = rank(B) - m.
inline SosCertificate extract_sos(const FeasibleB& fb, const RMatrix& r) {
  const int l = r.l;
  if (fb.l != l || fb.B.rows() != l * l)
    throw std::invalid_argument("extract_sos: InfeasibleInput (size mismatch)");
  const Mat rf = r.flat();
  const Mat m = fb.B - rf.transpose() * rf;
  const PsdCertificate cert = ldl_psd(m);
  if (!cert.is_psd())
    throw std::logic_error("extract_sos: NegativePivot in B - R^T R (upstream bug: B was certified PSD)");
  SosCertificate out;
  out.n = 2 * l;
  out.l = l;
  out.m = r.m;
  for (int t = 0; t < int(cert.D.size()); ++t) {
    if (cert.D[t] == 0) continue;
    SosCertificate::Item it;
    it.weight = rat(4) * cert.D[t];
    it.row = cert.L.col(t);
    out.items.push_back(std::move(it));
  }
  out.rank = int(out.items.size());
  return out;
}

struct CertificateVerification {
  bool identity_ok = false;      // sum of weighted squares equals G_F exactly
  bool weights_positive = false;
  bool rows_independent = false;  // row rank equals item count
  bool rank_consistent = false;   // declared rank equals item count
  Polynomial residual;

  bool pass() const {
    return identity_ok && weights_positive && rows_independent && rank_consistent;
  }
};

// Exact expansion of sum_j w_j (row_j . ~X)^2 - G_F plus the independence
// and rank bookkeeping checks.
inline CertificateVerification verify_certificate(const SosCertificate& cert,
                                                  const Polynomial& gf) {
  CertificateVerification v;
  const int l = cert.l;
  const auto xt = monomial_vector_Xtilde(l);
  Polynomial acc(2 * l);
  v.weights_positive = true;
  for (const auto& it : cert.items) {
    if (it.weight <= 0) v.weights_positive = false;
    Polynomial q(2 * l);
    for (int a = 0; a < l * l; ++a)
      if (it.row[a] != 0) q.add_term(xt[a], it.row[a]);
    acc += it.weight * (q * q);
  }
  v.residual = acc - gf;
  v.identity_ok = v.residual.is_zero();
  Mat rows(int(cert.items.size()), l * l);
  for (int i = 0; i < int(cert.items.size()); ++i)
    for (int a = 0; a < l * l; ++a) rows(i, a) = cert.items[i].row[a];
  v.rows_independent = rank(rows) == int(cert.items.size());
  v.rank_consistent = cert.rank == int(cert.items.size());
  return v;
}

enum class SosVerdict { Sos, NonSos };

inline const char* to_string(SosVerdict v) {
  return v == SosVerdict::Sos ? "sos" : "non-sos";
}

// The sos classification as a lookup on the multiplicity pair:
// sos iff (1, k), (2, 2k-1), (3, 4), (4, 3) indefinite, (5, 2) or (6, 1).
// Everything else, including all pairs with m_+ >= 7, is non-sos.
inline SosVerdict classify(int m_plus, int m_minus, SystemClass cls = SystemClass::Unique) {
  if (m_plus < 1 || m_minus < 1) throw std::invalid_argument("classify: need m_+, m_- >= 1");
  if (m_plus % 4 == 0 && cls == SystemClass::Unique)
    throw std::invalid_argument("AmbiguousClass: m_+ = 0 (mod 4) needs an explicit class");
  switch (m_plus) {
    case 1: return SosVerdict::Sos;
    case 2: return m_minus % 2 == 1 ? SosVerdict::Sos : SosVerdict::NonSos;
    case 3: return m_minus == 4 ? SosVerdict::Sos : SosVerdict::NonSos;
    case 4:
      return (m_minus == 3 && cls == SystemClass::Indefinite) ? SosVerdict::Sos
                                                              : SosVerdict::NonSos;
    case 5: return m_minus == 2 ? SosVerdict::Sos : SosVerdict::NonSos;
    case 6: return m_minus == 1 ? SosVerdict::Sos : SosVerdict::NonSos;
    default: return SosVerdict::NonSos;
  }
}

struct RankBounds {
  int lower = 0;
  int upper = 0;
  bool lower_attainable = false;
};

// Representation-rank bounds for the sos pairs, l = m_+ + m_- + 1:
//   (1, k):      l-1 <= r <= l(l-1)/2
//   (2, 2k-1):   l-2 <= r <= l(l-2)/4
//   m in 3..6:   r = 8 - m (unique)
// In the two families the lower bound is attainable iff l = 4 or l = 8.
inline RankBounds rank_bounds(int m_plus, int m_minus, SystemClass cls = SystemClass::Unique) {
  if (classify(m_plus, m_minus, cls) != SosVerdict::Sos)
    throw std::invalid_argument("rank_bounds: NotSos");
  const int l = m_plus + m_minus + 1;
  RankBounds b;
  if (m_plus == 1) {
    b.lower = l - 1;
    b.upper = l * (l - 1) / 2;
    b.lower_attainable = (l == 4 || l == 8);
  } else if (m_plus == 2) {
    b.lower = l - 2;
    b.upper = l * (l - 2) / 4;
    b.lower_attainable = (l == 4 || l == 8);
  } else {
    b.lower = b.upper = 8 - m_plus;
    b.lower_attainable = true;
  }
  return b;
}

}  // namespace fkm

#endif

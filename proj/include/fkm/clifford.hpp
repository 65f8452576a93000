#ifndef FKM_CLIFFORD_HPP
#define FKM_CLIFFORD_HPP

#include <fkm/complexmat.hpp>
#include <fkm/matrix.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace fkm {

// Geometric class convention: one class for m != 0 (mod 4); explicit
// definite/indefinite for m = 4 (distinguished by P_0...P_m = +-I or not).
enum class SystemClass { Unique, Definite, Indefinite };

inline const char* to_string(SystemClass c) {
  switch (c) {
    case SystemClass::Unique: return "unique";
    case SystemClass::Definite: return "definite";
    case SystemClass::Indefinite: return "indefinite";
  }
  return "?";
}

inline SystemClass parse_system_class(const std::string& s) {
  if (s == "unique") return SystemClass::Unique;
  if (s == "definite") return SystemClass::Definite;
  if (s == "indefinite") return SystemClass::Indefinite;
  throw std::invalid_argument("unknown class '" + s + "'");
}

// Minimal dimension of an irreducible real representation of C_{m-1}.
inline int delta(int m) {
  if (m < 1) throw std::invalid_argument("delta: m must be >= 1");
  static const int table[8] = {1, 2, 4, 4, 8, 8, 8, 8};
  int factor = 1;
  while (m > 8) {
    m -= 8;
    factor *= 16;
  }
  return factor * table[m - 1];
}

struct MultiplicityEntry {
  int m;        // m_+
  int k;        // number of irreducible summands, l = k * delta(m)
  int m_minus;  // k * delta(m) - m - 1
  bool multi_class;  // m = 0 (mod 4): several geometric classes
};

// The (m_+, m_-) table of OT-FKM multiplicity pairs; entries with
// m_- <= 0 are omitted.
inline std::vector<MultiplicityEntry> enumerate_multiplicities(int max_m, int max_k) {
  std::vector<MultiplicityEntry> out;
  for (int m = 1; m <= max_m; ++m)
    for (int k = 1; k <= max_k; ++k) {
      const int mm = k * delta(m) - m - 1;
      if (mm <= 0) continue;
      out.push_back({m, k, mm, m % 4 == 0});
    }
  return out;
}

// ~E_1, ~E_2, ~E_3: the 4x4 real representation of C_3 from the Pauli
// matrices, ~E_1 = -iota_2(i s3), ~E_2 = iota_2(i s2), ~E_3 = -iota_2(i s1).
inline Mat e_tilde(int j) {
  switch (j) {
    case 1: return -iota_k(pauli(3).times_i());
    case 2: return iota_k(pauli(2).times_i());
    case 3: return -iota_k(pauli(1).times_i());
    default: throw std::invalid_argument("e_tilde: index must be 1, 2 or 3");
  }
}

// E_1..E_5 on R^8 from the Dirac matrices:
// E_1 = iota_4(i g0), E_2 = iota_4(g1), E_3 = iota_4(g2), E_4 = iota_4(g3),
// E_5 = iota_4(i g5).
inline std::vector<Mat> dirac_e_family() {
  const auto g = dirac_gammas();
  std::vector<Mat> e;
  e.push_back(iota_k(g[0].times_i()));
  e.push_back(iota_k(g[1]));
  e.push_back(iota_k(g[2]));
  e.push_back(iota_k(g[3]));
  e.push_back(iota_k(g[4].times_i()));
  return e;
}

inline Mat block_diag_copies(const Mat& b, int copies) {
  Mat m = b;
  for (int i = 1; i < copies; ++i) m = dsum(m, b);
  return m;
}

namespace detail {
inline std::invalid_argument unsupported_pair(int m, int l, SystemClass cls) {
  return std::invalid_argument("UnsupportedPair: no representative for m=" + std::to_string(m) +
                               ", l=" + std::to_string(l) + ", class=" + to_string(cls));
}
}  // namespace detail

// Explicit skew-symmetric generators E_1..E_{m-1} on R^l for the pairs the
// constructions cover: (1, l>=3), (2, even l>=4), (3, 4r), (4, 4r definite),
// (4, 8 indefinite), (5, 8), (6, 8). For m = 3 on l = 8 and m in {4
// (indefinite), 5, 6} the representative is the leading part of the Dirac
// family, so restricting an (m, 8) system to fewer P's lands on the same
// matrices; elsewhere the ~E block sums are used.
inline std::vector<Mat> build_E(int m, int l, SystemClass cls = SystemClass::Unique) {
  if (m < 1 || l < 1) throw detail::unsupported_pair(m, l, cls);
  if (m % 4 == 0 && cls == SystemClass::Unique)
    throw std::invalid_argument("AmbiguousClass: m = 0 (mod 4) needs an explicit class");
  if (m % 4 != 0 && cls != SystemClass::Unique)
    throw std::invalid_argument("AmbiguousClass: only m = 0 (mod 4) has several classes");

  switch (m) {
    case 1:
      if (l < 3) throw detail::unsupported_pair(m, l, cls);
      return {};
    case 2: {
      if (l < 4 || l % 2 != 0) throw detail::unsupported_pair(m, l, cls);
      const Mat e1 = -kron(Mat::identity(l / 2), iota(0, 1));
      return {e1};
    }
    case 3: {
      if (l < 4 || l % 4 != 0) throw detail::unsupported_pair(m, l, cls);
      if (l == 8) {
        auto fam = dirac_e_family();
        return {fam[0], fam[1]};
      }
      const int r = l / 4;
      return {block_diag_copies(e_tilde(1), r), block_diag_copies(e_tilde(2), r)};
    }
    case 4: {
      if (l < 4 || l % 4 != 0) throw detail::unsupported_pair(m, l, cls);
      if (cls == SystemClass::Definite) {
        const int r = l / 4;
        return {block_diag_copies(e_tilde(1), r), block_diag_copies(e_tilde(2), r),
                block_diag_copies(e_tilde(3), r)};
      }
      if (l != 8) throw detail::unsupported_pair(m, l, cls);
      auto fam = dirac_e_family();
      return {fam[0], fam[1], fam[2]};
    }
    case 5: {
      if (l != 8) throw detail::unsupported_pair(m, l, cls);
      auto fam = dirac_e_family();
      return {fam[0], fam[1], fam[2], fam[3]};
    }
    case 6: {
      if (l != 8) throw detail::unsupported_pair(m, l, cls);
      return dirac_e_family();
    }
    default:
      throw detail::unsupported_pair(m, l, cls);
  }
}

// Symmetric Clifford system P_0..P_m on R^{2l} in the normal form
//   P_0 = diag(I_l, -I_l), P_1 = antidiag(I_l, I_l),
//   P_{a+1} = [[0, E_a], [-E_a, 0]].
struct CliffordSystem {
  int m = 0;
  int l = 0;
  SystemClass cls = SystemClass::Unique;
  std::vector<Mat> E;  // E_1..E_{m-1}; E_0 = I_l kept implicit
  std::vector<Mat> P;  // P_0..P_m

  int n() const { return 2 * l; }
  int m_plus() const { return m; }
  int m_minus() const { return l - m - 1; }

  // a in [0, m): the a-th generator with E_0 = I_l.
  Mat e_mat(int a) const {
    if (a < 0 || a >= m) throw std::out_of_range("CliffordSystem::e_mat");
    return a == 0 ? Mat::identity(l) : E[a - 1];
  }
};

inline void verify_clifford_relations(const CliffordSystem& sys) {
  const int l = sys.l;
  const Mat il = Mat::identity(l), i2l = Mat::identity(2 * l);
  for (int a = 0; a < int(sys.E.size()); ++a) {
    const Mat& e = sys.E[a];
    if (e.rows() != l || e.cols() != l || !e.is_skew_symmetric())
      throw std::logic_error("CliffordSystem: E_" + std::to_string(a + 1) + " not skew-symmetric");
    for (int b = a; b < int(sys.E.size()); ++b) {
      Mat anti = sys.E[a] * sys.E[b] + sys.E[b] * sys.E[a];
      const Mat want = a == b ? Mat(rat(-2) * il) : Mat(l, l);
      if (anti != want)
        throw std::logic_error("CliffordSystem: E relation fails at (" + std::to_string(a + 1) +
                               "," + std::to_string(b + 1) + ")");
    }
  }
  if (int(sys.P.size()) != sys.m + 1) throw std::logic_error("CliffordSystem: wrong P count");
  for (int a = 0; a <= sys.m; ++a) {
    if (!sys.P[a].is_symmetric())
      throw std::logic_error("CliffordSystem: P_" + std::to_string(a) + " not symmetric");
    for (int b = a; b <= sys.m; ++b) {
      Mat anti = sys.P[a] * sys.P[b] + sys.P[b] * sys.P[a];
      const Mat want = a == b ? Mat(rat(2) * i2l) : Mat(2 * l, 2 * l);
      if (anti != want)
        throw std::logic_error("CliffordSystem: P relation fails at (" + std::to_string(a) + "," +
                               std::to_string(b) + ")");
    }
  }
}

inline CliffordSystem build_system(int m, int l, SystemClass cls = SystemClass::Unique) {
  CliffordSystem sys;
  sys.m = m;
  sys.l = l;
  sys.cls = cls;
  sys.E = build_E(m, l, cls);

  const Mat il = Mat::identity(l);
  Mat p0(2 * l, 2 * l), p1(2 * l, 2 * l);
  p0.set_block(0, 0, il);
  p0.set_block(l, l, -il);
  p1.set_block(0, l, il);
  p1.set_block(l, 0, il);
  sys.P.push_back(p0);
  sys.P.push_back(p1);
  for (const Mat& e : sys.E) {
    Mat p(2 * l, 2 * l);
    p.set_block(0, l, e);
    p.set_block(l, 0, -e);
    sys.P.push_back(p);
  }
  verify_clifford_relations(sys);

  if (m % 4 == 0) {
    // P_0...P_m = +-I exactly in the definite class.
    Mat prod = sys.P[0];
    for (int a = 1; a <= m; ++a) prod = prod * sys.P[a];
    const Mat i2l = Mat::identity(2 * l);
    const bool definite = (prod == i2l || prod == -i2l);
    if (definite != (cls == SystemClass::Definite))
      throw std::logic_error("CliffordSystem: representative does not match requested class");
  }
  return sys;
}

// First m'+1 matrices of a system; the associated generators are the first
// m'-1 E's. The class tag degenerates to Unique unless m' = 0 (mod 4).
inline CliffordSystem restrict_system(const CliffordSystem& sys, int m_prime) {
  if (m_prime < 1 || m_prime >= sys.m)
    throw std::invalid_argument("restrict_system: BadRange");
  CliffordSystem r;
  r.m = m_prime;
  r.l = sys.l;
  r.E.assign(sys.E.begin(), sys.E.begin() + (m_prime - 1));
  r.P.assign(sys.P.begin(), sys.P.begin() + (m_prime + 1));
  if (m_prime % 4 != 0) {
    r.cls = SystemClass::Unique;
  } else {
    Mat prod = r.P[0];
    for (int a = 1; a <= m_prime; ++a) prod = prod * r.P[a];
    const Mat i2l = Mat::identity(2 * sys.l);
    r.cls = (prod == i2l || prod == -i2l) ? SystemClass::Definite : SystemClass::Indefinite;
  }
  verify_clifford_relations(r);
  return r;
}

}  // namespace fkm

#endif

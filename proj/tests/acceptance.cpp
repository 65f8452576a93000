// Acceptance suite: one pass/fail line per criterion. All checks except the
// numerical probe (criterion 11, informational by contract) are exact and
// gate the exit code.

#include <fkm/clifford.hpp>
#include <fkm/deduction.hpp>
#include <fkm/forms.hpp>
#include <fkm/matrix.hpp>
#include <fkm/probe.hpp>
#include <fkm/sdpcert.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace fkm;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, bool ok, bool gates = true) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << name
            << (gates ? "" : " (informational)") << std::endl;
  if (!ok && gates) ++g_failures;
}

struct FeasibleCase {
  std::string name;
  int m;
  CliffordSystem sys;
  RMatrix r;
  Mat b;
  int expected_cert_rank;
};

std::vector<FeasibleCase> feasible_cases() {
  std::vector<FeasibleCase> cases;
  for (int l = 3; l <= 8; ++l) {
    CliffordSystem sys = build_system(1, l);
    cases.push_back({"B1(l=" + std::to_string(l) + ")", 1, sys, build_R(sys), build_B1(l).B,
                     l * (l - 1) / 2});
  }
  for (int l : {4, 6, 8}) {
    CliffordSystem sys = build_system(2, l);
    cases.push_back({"B2(l=" + std::to_string(l) + ")", 2, sys, build_R(sys), build_B2(l).B,
                     l * (l - 2) / 4});
  }
  const CliffordSystem sys6 = build_system(6, 8);
  const RMatrix r6 = build_R(sys6);
  const Mat b6 = build_B6().B;
  for (int m : {3, 4, 5, 6}) {
    CliffordSystem sys = m == 6 ? sys6 : restrict_system(sys6, m);
    RMatrix r = m == 6 ? r6 : restrict_R(r6, m);
    cases.push_back({"B6(m=" + std::to_string(m) + ")", m, sys, r, b6, 8 - m});
  }
  return cases;
}

}  // namespace

int main() {
  const auto cases = feasible_cases();

  // 1. Feasibility of the constructions against the block SDP, exact.
  {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : cases) {
      auto rep = check_feasible(c.b, c.r);
      if (!rep.feasible) {
        ok = false;
        detail << " [" << c.name << ": " << rep.summary() << "]";
      }
    }
    criterion(1, "check_feasible passes for B1 l=3..8, B2 l=4,6,8, B6 vs R^(3..6)" + detail.str(),
              ok);
  }

  // 2. Exact rank formulas of the constructions.
  {
    bool ok = true;
    for (int l = 3; l <= 8; ++l) ok = ok && rank(build_B1(l).B) == l * (l - 1) / 2 + 1;
    for (int l : {4, 6, 8}) ok = ok && rank(build_B2(l).B) == l * (l - 2) / 4 + 2;
    ok = ok && rank(build_B6().B) == 8;
    criterion(2, "rank B1 = l(l-1)/2+1, rank B2 = l(l-2)/4+2, rank B6 = 8", ok);
  }

  // 3. Rank law rank(B - R^T R) = rank(B) - m for every constructed B.
  {
    bool ok = true;
    for (const auto& c : cases) {
      const Mat rf = c.r.flat();
      ok = ok && rank(c.b - rf.transpose() * rf) == rank(c.b) - c.m;
    }
    criterion(3, "rank(B - R^T R) = rank(B) - m for every construction", ok);
  }

  // 4. Certificate identity and exact certificate ranks.
  {
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : cases) {
      auto fr = check_feasible(c.b, c.r);
      if (!fr.feasible) {
        ok = false;
        continue;
      }
      FeasibleB fb{c.r.l, c.b, c.name, *fr.psd};
      SosCertificate cert = extract_sos(fb, c.r);
      auto v = verify_certificate(cert, build_GF(c.sys));
      if (!v.pass() || cert.rank != c.expected_cert_rank) {
        ok = false;
        detail << " [" << c.name << ": rank " << cert.rank << ", expected "
               << c.expected_cert_rank << (v.pass() ? "" : ", residual nonzero") << "]";
      }
    }
    criterion(4, "extract_sos certificates verify with zero residual and the exact ranks" +
                     detail.str(),
              ok);
  }

  // 5. Gram assembly: X^T Q X = G_F exactly; Q zero outside the mixed block.
  {
    bool ok = true;
    for (const auto& c : cases) {
      const int l = c.r.l, n = 2 * l;
      Mat q = gram_from_B(c.b, c.r);
      if (expand_quadratic_in_basis(q, monomial_vector_X(n)) != build_GF(c.sys)) ok = false;
      std::vector<bool> mixed(n * (n + 1) / 2, false);
      for (int i = 0; i < l; ++i)
        for (int j = 0; j < l; ++j) mixed[x_index_of_pair(n, i, l + j)] = true;
      for (int a = 0; a < q.rows() && ok; ++a)
        for (int b2 = 0; b2 < q.cols() && ok; ++b2)
          if ((!mixed[a] || !mixed[b2]) && q(a, b2) != 0) ok = false;
    }
    criterion(5, "X^T Q X - G_F = 0 exactly and Q is supported on the mixed block", ok);
  }

  // 6. Cartan-Munzner identities, exact, for the named systems.
  {
    bool ok = true;
    std::ostringstream detail;
    auto check = [&](int m, int l, SystemClass cls, const std::string& tag) {
      auto rep = check_cartan_munzner(build_system(m, l, cls));
      if (!rep.ok()) {
        ok = false;
        detail << " [" << tag << "]";
      }
    };
    check(1, 3, SystemClass::Unique, "(1,3)");
    check(2, 4, SystemClass::Unique, "(2,4)");
    check(3, 4, SystemClass::Unique, "(3,4)");
    check(4, 8, SystemClass::Definite, "(4,8)D");
    check(4, 8, SystemClass::Indefinite, "(4,8)I");
    check(5, 8, SystemClass::Unique, "(5,8)");
    check(6, 8, SystemClass::Unique, "(6,8)");
    check(3, 12, SystemClass::Unique, "(3,12)");
    criterion(6, "|grad F|^2 = 16|x|^6 and Delta F = 8(m_- - m_+)|x|^2 exactly" + detail.str(),
              ok);
  }

  // 7. The two non-sos witnesses, exact.
  {
    bool ok = true;
    auto w43 = witness_43D();
    Mat expected(8, 8);
    expected.set_block(0, 4, tau(0, e_tilde(1)));
    expected.set_block(4, 0, -e_tilde(1));
    ok = ok && w43.contradiction.has_value() &&
         w43.contradiction->kind == ContradictionReport::Kind::SkewViolation &&
         w43.contradiction->offending_block == expected && reverify(*w43.contradiction, w43.state);
    for (int r : {3, 4}) {
      auto w = witness_34r(r);
      ok = ok && w.contradiction.has_value() &&
           w.contradiction->kind == ContradictionReport::Kind::IndefiniteWitness &&
           w.contradiction->probe_value == -3 && reverify(*w.contradiction, w.state);
    }
    criterion(7, "witness_43D reproduces the displayed skew violation; witness_34r(3,4) give -3",
              ok);
  }

  // 8. Uniqueness derivation equals the direct construction; C_7 relations.
  {
    bool ok = true;
    auto d = derive_B6();
    ok = ok && d.derived.B == build_B6().B;
    auto grid = split_blocks(d.derived.B, 8);
    const Mat minus2 = rat(-2) * Mat::identity(8);
    for (int i = 1; i < 8 && ok; ++i)
      for (int j = 1; j < 8 && ok; ++j) {
        Mat anti = grid[0][i] * grid[0][j] + grid[0][j] * grid[0][i];
        if (anti != (i == j ? minus2 : Mat(8, 8))) ok = false;
      }
    criterion(8, "derive_B6 equals build_B6 entrywise and its blocks satisfy the C_7 relations",
              ok);
  }

  // 9. Classification agrees with the frozen table (m <= 6, k <= 5) and
  //    the spot pairs.
  {
    bool ok = true;
    std::ostringstream detail;
    struct Expect {
      int mp, mm;
      SystemClass cls;
      SosVerdict want;
    };
    std::vector<Expect> table = {
        {1, 1, SystemClass::Unique, SosVerdict::Sos},
        {1, 2, SystemClass::Unique, SosVerdict::Sos},
        {1, 3, SystemClass::Unique, SosVerdict::Sos},
        {2, 1, SystemClass::Unique, SosVerdict::Sos},
        {2, 3, SystemClass::Unique, SosVerdict::Sos},
        {2, 5, SystemClass::Unique, SosVerdict::Sos},
        {2, 7, SystemClass::Unique, SosVerdict::Sos},
        {3, 4, SystemClass::Unique, SosVerdict::Sos},
        {3, 8, SystemClass::Unique, SosVerdict::NonSos},
        {3, 12, SystemClass::Unique, SosVerdict::NonSos},
        {3, 16, SystemClass::Unique, SosVerdict::NonSos},
        {4, 3, SystemClass::Definite, SosVerdict::NonSos},
        {4, 3, SystemClass::Indefinite, SosVerdict::Sos},
        {4, 7, SystemClass::Definite, SosVerdict::NonSos},
        {4, 7, SystemClass::Indefinite, SosVerdict::NonSos},
        {4, 11, SystemClass::Definite, SosVerdict::NonSos},
        {4, 11, SystemClass::Indefinite, SosVerdict::NonSos},
        {4, 15, SystemClass::Definite, SosVerdict::NonSos},
        {5, 2, SystemClass::Unique, SosVerdict::Sos},
        {5, 10, SystemClass::Unique, SosVerdict::NonSos},
        {5, 18, SystemClass::Unique, SosVerdict::NonSos},
        {5, 26, SystemClass::Unique, SosVerdict::NonSos},
        {5, 34, SystemClass::Unique, SosVerdict::NonSos},
        {6, 1, SystemClass::Unique, SosVerdict::Sos},
        {6, 9, SystemClass::Unique, SosVerdict::NonSos},
        {6, 17, SystemClass::Unique, SosVerdict::NonSos},
        {6, 25, SystemClass::Unique, SosVerdict::NonSos},
        {6, 33, SystemClass::Unique, SosVerdict::NonSos},
        // spot pairs
        {7, 8, SystemClass::Unique, SosVerdict::NonSos},
    };
    for (const auto& e : table)
      if (classify(e.mp, e.mm, e.cls) != e.want) {
        ok = false;
        detail << " [(" << e.mp << "," << e.mm << ")]";
      }
    criterion(9, "classify matches the classification table on all pairs with m <= 6" +
                     detail.str(),
              ok);
  }

  // 10. Monotonicity under row restriction: B6 stays feasible and the
  //     extracted ranks are 8 - m'.
  {
    bool ok = true;
    const CliffordSystem sys6 = build_system(6, 8);
    const RMatrix r6 = build_R(sys6);
    const Mat b6 = build_B6().B;
    for (int mp : {3, 4, 5}) {
      RMatrix r = restrict_R(r6, mp);
      auto fr = check_feasible(b6, r);
      if (!fr.feasible) {
        ok = false;
        continue;
      }
      FeasibleB fb{8, b6, "B6", *fr.psd};
      SosCertificate cert = extract_sos(fb, r);
      auto v = verify_certificate(cert, build_GF(restrict_system(sys6, mp)));
      ok = ok && cert.rank == 8 - mp && v.pass();
    }
    criterion(10, "B6 feasible under restrict_R to m' in {3,4,5} with ranks 8 - m'", ok);
  }

  // 11. Numerical probe, informational: convergence on three feasible cases,
  //     stall on the definite (4,8) case.
  {
    bool ok = true;
    for (auto [m, l] : {std::pair<int, int>{1, 3}, {2, 4}, {6, 8}}) {
      auto rep = feasibility_probe(m, l);
      ok = ok && rep.verdict == ProbeReport::Verdict::Converged && rep.affine_residual < 1e-7 &&
           rep.cone_residual < 1e-7 && rep.iterations <= 10000;
    }
    auto bad = feasibility_probe(4, 8, SystemClass::Definite);
    ok = ok && bad.verdict == ProbeReport::Verdict::Stalled &&
         std::max(bad.affine_residual, bad.cone_residual) > 1e-3;
    criterion(11, "probe converges on (1,3), (2,4), (6,8) and stalls on (4,8)-definite", ok,
              /*gates=*/false);
  }

  std::cout << (g_failures == 0 ? "ACCEPTANCE: all gating criteria passed"
                                : "ACCEPTANCE: " + std::to_string(g_failures) + " criteria FAILED")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}

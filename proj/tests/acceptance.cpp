// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "hmf/borcherds.hpp"
#include "hmf/cmvalues.hpp"
#include "hmf/lifts.hpp"

using namespace hmf;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void run(int n, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  char t[32];
  std::snprintf(t, sizeof t, "%.2fs", s);
  std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << title << " (" << t << ")"
            << o.detail.str() << std::endl;
}

Rat pw(long b, long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), b, e);
  return Rat(r);
}

const std::vector<PlusForm>& basis5() {
  static const std::vector<PlusForm> b = w0plus_basis(5, 10, 40);
  return b;
}

const PlusForm& fm(long m) {
  for (auto& f : basis5())
    if (f.pole_order == m) return f;
  fail(ErrorKind::Internal, "missing f_m");
}

}  // namespace

int main() {
  const QuadField F = QuadField::from_disc(5);

  run(1, "zeta table: 28 values of zeta_F(-1), zeta_F(-3)", [](Outcome& o) {
    const long D[14] = {5, 8, 12, 13, 17, 21, 24, 28, 29, 33, 37, 40, 41, 44};
    const char* z2[14] = {"1/30", "1/12", "1/6", "1/6", "1/3", "1/3", "1/2", "2/3", "1/2", "1", "5/6", "7/6", "4/3", "7/6"};
    const char* z4[14] = {"1/60",   "11/120", "23/60",  "29/60",   "41/30",   "77/30",  "87/20",
                          "113/15", "157/20", "141/10", "1129/60", "1577/60", "448/15", "2153/60"};
    int ok = 0;
    for (int i = 0; i < 14; ++i) {
      ok += rat_str(siegel_zeta(D[i], 2)) == z2[i];
      ok += rat_str(siegel_zeta(D[i], 4)) == z4[i];
    }
    o.detail << " " << ok << "/28 exact";
    o.require(ok == 28, "table mismatch");
  });

  run(2, "plus-space golden gate: f_1, f_4, f_5, f_6, f_9, f_10 and E_2^+ (p = 5)", [](Outcome& o) {
    std::map<long, std::map<long, Rat>> want{
        {1, {{-1, 1}, {0, 5}, {1, 11}, {4, -54}, {5, 55}, {6, 44}, {9, -395}, {10, 340}, {11, 296}, {14, -1836}}},
        {4, {{-4, 1}, {0, 15}, {1, -216}, {4, 4959}, {5, 22040}, {6, -90984}, {9, 409944}, {10, 1388520}}},
        {5, {{-5, make_rat(1, 2)}, {0, 15}, {1, 275}, {4, 27550}, {5, 43893}, {6, 255300}, {9, 4173825}}},
        {6, {{-6, 1}, {0, 10}, {1, 264}, {4, -136476}, {5, 306360}, {6, 616220}, {9, -35408776}}},
        {9, {{-9, 1}, {0, 35}, {1, -3555}, {4, 922374}, {5, 7512885}, {6, -53113164}, {9, 953960075}}},
        {10, {{-10, make_rat(1, 2)}, {0, 10}, {1, 3400}, {4, 3471300}, {5, 9614200}, {6, 91620925}}}};
    int n = 0, ok = 0;
    for (auto& [m, cs] : want) {
      const PlusForm& f = fm(m);
      // Printed terms; every exponent in between that is not printed is zero.
      long top = cs.rbegin()->first;
      for (long e = -m; e <= top; ++e) {
        Rat w = cs.count(e) ? cs[e] : Rat(0);
        ++n;
        ok += f.c(e) == w;
      }
    }
    PlusForm e2 = eisenstein_plus(5, 2, 1, 16);
    std::map<long, long> we{{0, 1}, {1, -10}, {4, -30}, {5, -30}, {6, -20}, {9, -70}, {10, -20}, {11, -120}, {14, -60}, {15, -40}};
    for (long k = 0; k <= 15; ++k) {
      ++n;
      ok += e2.c(k) == (we.count(k) ? we[k] : 0);
    }
    o.detail << " " << ok << "/" << n << " coefficients";
    o.require(ok == n, "coefficient mismatch");
  });

  run(3, "pairing: <E_2^+,E_2^+> = E_4 (constant term 1) through q^20; residue pairing vanishes", [](Outcome& o) {
    PlusForm e2 = eisenstein_plus(5, 2, 1, 5 * 20 + 1);
    QSeries g = pairing(e2, e2, 21);
    QSeries e4 = level1_form(Level1::E4, 21);
    bool eq = agree(g, e4), twice = agree(g, 2 * e4);
    o.detail << " <E_2^+,E_2^+> = " << rat_str(g.coeff(0)) << " + " << rat_str(g.coeff(1)) << "q + ...; "
             << (eq ? "equals E_4" : twice ? "equals 2*E_4 exactly, not E_4" : "not a multiple of E_4");
    o.require(eq, "<E_2^+,E_2^+> != E_4");
    int zero = 0;
    for (auto& f : basis5()) {
      Rat s = 0;
      for (long n = -f.pole_order; n <= 0; ++n) s += f.ctilde(n) * e2.c(-n);
      zero += s == 0;
    }
    o.detail << "; residue pairing zero for " << zero << "/" << basis5().size() << " f_m";
    o.require(zero == long(basis5().size()), "residue pairing");
  });

  run(4, "weight(Psi_m) = -B_2^+(m)/2, multiple of 5, m in {1,4,5,6,9,10}", [](Outcome& o) {
    PlusForm e2 = eisenstein_plus(5, 2, 1, 11);
    for (long m : {1, 4, 5, 6, 9, 10}) {
      auto P = borcherds_lift(5, {{m, Rat(1)}}, 1);
      Rat want = -e2.c(m) / 2;
      o.detail << " Psi_" << m << ":" << rat_str(P.weight);
      o.require(P.weight == want, "weight of Psi_" + std::to_string(m));
      o.require(P.weight.get_den() == 1 && P.weight.get_num() % 5 == 0, "divisibility by 5");
    }
  });

  run(5, "Weyl data: R(1,W) = {eps^2/sqrt5}, rho_1 = eps/sqrt5, rho_6 = rho_10 = 0", [&](Outcome& o) {
    QuadElem eps = F.eps0(), rt5 = QuadElem::sqrtD(5);
    WeylChamber W = chamber_of(F, {1}, 2, 3);
    auto R = reduced_set(1, W);
    o.require(R.lambdas.size() == 1 && R.lambdas[0] == eps * eps / rt5, "R(1,W)");
    o.require(weyl_vector(1, W) == eps / rt5, "rho_1");
    WeylChamber W0 = chamber_of(F, {6, 10}, 2, 3);
    o.require(weyl_vector(6, W0).is_zero() && weyl_vector(10, W0).is_zero(), "rho_6, rho_10");
    o.detail << " basepoint (2,3) stands in for (1,eps0)";
  });

  run(6, "Psi_1^2 ~ s_10; Psi_1 Psi_6 = lift(f_1+f_6) (trace <= 4); s_15^2 relation (trace <= 6)", [](Outcome& o) {
    const long T = 5;
    auto s5 = borcherds_lift(5, {{1, Rat(1)}}, T).to_hilbert();
    auto s10 = gundlach("s10", T);
    auto c = proportionality(s5 * s5, s10);
    o.detail << " Psi_1^2 = " << (c ? rat_str(*c) : "?") << " * s_10";
    o.require(c && *c != 0, "Psi_1^2 vs s_10");
    auto p6 = borcherds_lift(5, {{6, Rat(1)}}, T).to_hilbert();
    auto p16 = borcherds_lift(5, {{1, Rat(1)}, {6, Rat(1)}}, T).to_hilbert();
    auto c2 = proportionality(s5 * p6, p16);
    o.require(c2 && *c2 == 1, "Psi_1 Psi_6 vs lift of f_1 + f_6");
    // Go past trace 4: s_15^2 has a single nonzero coefficient there.
    const long T15 = 7;
    auto s15 = gundlach("s15", T15);
    auto g2 = gundlach("g2", T15), s6 = gundlach("s6", T15);
    s10 = gundlach("s10", T15);
    auto R = pw(5, 5) * pow(s10, 3) - (pw(5, 3) / 2) * (pow(g2, 2) * s6 * pow(s10, 2)) +
             (Rat(1) / 16) * (pow(g2, 5) * pow(s10, 2)) + (Rat(9 * 25) / 2) * (g2 * pow(s6, 3) * s10) -
             (Rat(1) / 8) * (pow(g2, 4) * pow(s6, 2) * s10) - Rat(54) * pow(s6, 5) +
             (Rat(1) / 16) * (pow(g2, 3) * pow(s6, 4));
    auto c3 = proportionality(s15 * s15, R);
    o.detail << "; s_15^2 = " << (c3 ? rat_str(*c3) : "?") << " * relation (" << R.coeffs.size()
             << " nonzero coefficients)";
    o.require(c3 && *c3 != 0 && !R.coeffs.empty(), "s_15^2 relation");
  });

  run(7, "expansion invariants; restrictions g_2 -> E_4 and s_6 -> Delta", [&](Outcome& o) {
    const long T = 5;
    std::vector<std::pair<std::string, HilbertQExpansion>> all;
    for (const char* g : {"g2", "g6", "g10", "s6", "s10", "s5", "s15"}) all.emplace_back(g, gundlach(g, T));
    all.emplace_back("DN(E_2^+)", doi_naganuma(eisenstein_plus(5, 2, 1, 40), T));
    all.emplace_back("Psi_6", borcherds_lift(5, {{6, Rat(1)}}, T).to_hilbert());
    int ok = 0, literal = 0;
    QuadElem e2 = F.eps0_sq();
    for (auto& [name, h] : all) {
      bool good = true;
      try {
        check_invariants(h, F);
      } catch (const Error&) {
        good = false;
      }
      good = good && h.parity != Parity::Unknown;
      ok += good;
      bool lit = true;
      for (auto& [k, c] : h.coeffs) {
        DualIndex m = dual_mul_unit(k, e2);
        if (m.v < h.trace_prec && h.coeff(m) != c) lit = false;
      }
      literal += lit;
      o.require(good, "invariants of " + name);
    }
    o.detail << " unit law a(eps^2 nu) = N(eps)^k a(nu) and parity hold for " << ok << "/" << all.size()
             << " expansions (the sign-free form holds for " << literal << "; odd weights s5, s15 flip sign)";
    QSeries rg2 = restrict_diagonal(gundlach("g2", 6));
    o.require(agree(rg2, level1_form(Level1::E4, 6)), "g_2 restriction");
    QSeries rs6 = restrict_diagonal(gundlach("s6", 6));
    QSeries d = level1_form(Level1::Delta, 6);
    bool is_delta = agree(rs6, d);
    o.detail << "; s_6 restricts to " << rat_str(rs6.coeff(1)) << "q + " << rat_str(rs6.coeff(2)) << "q^2 + ... = "
             << (is_delta ? "Delta" : agree(rs6, 2 * d) ? "2*Delta" : "?");
    o.require(is_delta, "s_6 restriction is not Delta");
  });

  run(8, "Doi-Naganuma(E_2^+) proportional to g_2 on trace <= 5", [&](Outcome& o) {
    auto dn = doi_naganuma(eisenstein_plus(5, 2, 1, 40), 6);
    auto g2 = hilbert_eisenstein(F, 2, 6);
    auto c = proportionality(dn, g2);
    o.detail << " scalar " << (c ? rat_str(*c) : "?");
    o.require(c && *c == dn.const_term / g2.const_term && *c != 0, "not proportional");
  });

  run(9, "Gross-Zagier vs j-value oracle", [](Outcome& o) {
    for (auto [d1, d2] : std::vector<std::pair<long, long>>{{-3, -7}, {-3, -4}, {-4, -7}, {-3, -8}, {-7, -23}}) {
      FactoredValue v = gross_zagier_J2(d1, d2);
      double a = v.log_abs(), b = gz_oracle_log(d1, d2);
      double rel = std::fabs(a - b) / std::max(1.0, std::fabs(b));
      o.detail << " (" << d1 << "," << d2 << ")=" << v.str();
      o.require(rel < 1e-6, "oracle mismatch at " + std::to_string(d1) + "," + std::to_string(d2));
      for (auto& [l, e] : v.exponents) o.require(4 * l <= d1 * d2, "prime above D/4");
    }
  });

  std::vector<std::pair<long, QuadElem>> rows{{5, QuadElem(-5, -1, 5)},
                                              {41, QuadElem(-13, -1, 5)},
                                              {61, QuadElem(-18, -4, 5)},
                                              {109, QuadElem(-21, -1, 5)}};
  auto bsmall = w0plus_basis(5, 10, 4);
  PlusForm R1 = plus_combination(bsmall, {{6, Rat(1)}, {1, Rat(-2)}});
  PlusForm R2 = plus_combination(bsmall, {{10, Rat(1)}, {1, Rat(-2)}});

  run(10, "CM value table for R_1, R_2 at q = 5, 41, 61, 109", [&](Outcome& o) {
    std::map<long, std::pair<std::string, std::string>> want{
        {5, {"2^20 * 3^10", "2^20 * 5^10"}},
        {41, {"2^14 * 3^10 * 61 * 73", "2^14 * 5^9 * 37 * 41"}},
        {61, {"2^20 * 3^6 * 13 * 97 * 109", "2^20 * 5^9 * 61"}},
        {109, {"2^20 * 3^8 * 61 * 157 * 193", "2^20 * 5^12 * 73"}}};
    int ok = 0;
    for (auto& [q, D] : rows) {
      auto data = cm_field_setup(5, q, D);
      auto v1 = by_cm_value(data, R1), v2 = by_cm_value(data, R2);
      ok += v1.value.str() == want[q].first;
      ok += v2.value.str() == want[q].second;
      o.require(v1.value.str() == want[q].first, "R_1 at q=" + std::to_string(q) + ": " + v1.value.str());
      o.require(v2.value.str() == want[q].second, "R_2 at q=" + std::to_string(q) + ": " + v2.value.str());
      if (q == 5) o.require(v1.value.sign == 1 && v2.value.sign == 1, "sign at q = 5");
    }
    o.detail << " " << ok << "/8 entries";
  });

  run(11, "prime bounds for every computed CM value", [&](Outcome& o) {
    int n = 0;
    for (auto& [q, D] : rows) {
      auto data = cm_field_setup(5, q, D);
      for (const PlusForm* f : {&R1, &R2}) {
        auto v = by_cm_value(data, *f);
        auto bc = prime_bound_check(data, *f, v);
        ++n;
        o.require(bc.ok, "bound at q=" + std::to_string(q));
      }
    }
    o.detail << " " << n << " values checked";
  });

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}

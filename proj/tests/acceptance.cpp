// Acceptance checks: prints one PASS/FAIL line per criterion and returns
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ntuple/cli.hpp"
#include "ntuple/ntuple.hpp"
#include "oracles.hpp"

using namespace ntuple;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

const Real& tol30() {
  static const Real t("1e-30");
  return t;
}

bool near30(const Real& a, const Real& b) { return oracle::rel_diff(a, b) < tol30(); }

Outcome criterion1() {
  Outcome o;
  const IntTable g2 = subgroup_count_table(2, 10000);
  for (std::size_t n = 1; n <= 10000; ++n) {
    if (g2[n] != oracle::sigma1(n)) {
      o.require(false, "g_2(" + std::to_string(n) + ") != sigma_1");
      break;
    }
  }
  for (unsigned ell = 1; ell <= 4; ++ell) {
    const IntTable g = subgroup_count_table(ell, 30);
    for (unsigned n = 1; n <= 30; ++n) {
      if (g[n] != hnf_subgroup_count(ell, n)) {
        o.require(false, "HNF mismatch at ell=" + std::to_string(ell) + " n=" + std::to_string(n));
      }
    }
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (unsigned ell = 2; ell <= 6; ++ell) {
    o.require(weighted_divisor_table(subgroup_count_table(ell - 1, 2000)) == subgroup_count_table(ell, 2000),
              "dual route differs at ell=" + std::to_string(ell));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const BigIntSeq a = expand_product(Power{0}, 5000);
  o.require(a == pentagonal_p(5000), "recurrence != pentagonal");
  o.require(a[100] == 190569292, "p(100) != 190569292");
  std::vector<ExponentSpec> specs;
  for (unsigned ell = 1; ell <= 6; ++ell) specs.push_back(ntuple_exponent(ell));
  for (unsigned d = 0; d <= kMaxPowerFamilyDegree; ++d) specs.push_back(Power{d});
  for (unsigned k = 3; k <= 6; ++k) specs.push_back(PolygonalIndicator{k});
  std::vector<mpz_class> t;
  for (unsigned i = 0; i < 300; ++i) t.emplace_back((i * 7 + 3) % 5);
  specs.push_back(Table{t});
  for (const auto& s : specs) {
    o.require(expand_product(s, 300) == expand_product_direct(s, 300), "direct differs for " + describe(s));
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (unsigned ell = 2; ell <= 3; ++ell) {
    const BigIntSeq seq = expand_product(ntuple_exponent(ell), 5);
    for (unsigned n = 0; n <= 5; ++n) {
      o.require(commuting_tuple_count(seq, n) == brute_force_commuting(ell, n),
                "brute force differs at ell=" + std::to_string(ell) + " n=" + std::to_string(n));
    }
  }
  const BigIntSeq n3 = expand_product(ntuple_exponent(3), 4);
  o.require(n3.values == std::vector<mpz_class>{1, 1, 4, 8, 21}, "N_3(0..4) != 1,1,4,8,21");
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (unsigned ell = 1; ell <= 6; ++ell) {
    try {
      expand_product(ntuple_exponent(ell), 2000);
    } catch (const IntegralityError& e) {
      o.require(false, e.what());
    }
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  PrecisionContext ctx(50);
  auto scope = ctx.activate();
  const Real p = oracle::pi(), z3 = oracle::zeta(3), z5 = oracle::zeta(5);
  const Real zp1 = oracle::zeta_prime(-1), zp2 = oracle::zeta_prime(-2);
  auto third = [](const Real& x) { return pow(x, Real(1) / 3); };

  const auto e3 = expansion_for(lf_data_ntuple(3, ctx), ctx);
  o.require(e3.terms.size() == 3, "ell=3 term count");
  if (e3.terms.size() == 3) {
    o.require(near30(e3.terms[0].A, pow(3 * p, Real(2) / 3) * third(z3) / 2), "ell=3 A_1");
    o.require(near30(e3.terms[1].A, -pow(p, Real(4) / 3) / (4 * pow(Real(3), Real(2) / 3) * third(z3))),
              "ell=3 A_2");
    o.require(near30(e3.terms[2].A, -p * p / (288 * z3)), "ell=3 A_3");
  }
  o.require(e3.b == mpq_class(47, 72), "ell=3 b");
  const Real c3 = exp(-zp1 / 2 - p * p / (288 * z3)) * pow(z3, Real(11) / 72) /
                  (pow(Real(2), Real(11) / 24) * pow(Real(3), Real(47) / 72) * pow(p, Real(11) / 72));
  o.require(near30(folded_prefactor(e3), c3), "ell=3 C");

  const auto d4 = lf_data_ntuple(4, ctx);
  const auto e4 = expansion_for(d4, ctx);
  o.require(near30(e4.terms[0].A, pow(Real(2), Real(7) / 4) * pow(p, Real(3) / 2) * pow(z3, Real(1) / 4) /
                                      (pow(Real(3), Real(3) / 2) * pow(Real(5), Real(1) / 4))),
            "A_{4,1}");
  o.require(e4.b == mpq_class(5, 8), "ell=4 b");
  o.require(near30(d4.l_prime_at_zero, zp2 / 24), "ell=4 exponential factor");
  o.require(near30(e4.C, exp(zp2 / 24) * pow(p, Real(1) / 4) * pow(z3, Real(1) / 8) /
                             (pow(Real(2), Real(13) / 8) * pow(Real(3), Real(1) / 4) * pow(Real(5), Real(1) / 8))),
            "ell=4 C");

  const auto d5 = lf_data_ntuple(5, ctx);
  const auto e5 = expansion_for(d5, ctx);
  o.require(near30(e5.terms[0].A, pow(Real(5), Real(4) / 5) * pow(p, Real(6) / 5) * pow(z3 * z5, Real(1) / 5) /
                                      (pow(Real(2), Real(9) / 5) * pow(Real(3), Real(2) / 5))),
            "A_{5,1}");
  o.require(e5.b == mpq_class(3, 5), "ell=5 b");
  o.require(near30(d5.l_prime_at_zero, zp2 / 2880), "ell=5 exponential factor");
  o.require(near30(e5.C, exp(zp2 / 2880) * pow(p * z3 * z5, Real(1) / 10) /
                             (pow(Real(2), Real(2) / 5) * pow(Real(3), Real(1) / 5) * pow(Real(5), Real(3) / 5))),
            "ell=5 C");

  for (unsigned ell = 6; ell <= 8; ++ell) {
    const auto e = expansion_for(lf_data_ntuple(ell, ctx), ctx);
    Real zp = 1;
    for (unsigned m = 2; m <= ell; ++m) zp *= oracle::zeta(m);
    const Real Z = pow(zp, Real(1) / ell);
    const Real L = Real(ell);
    const Real fact = oracle::gamma_int(ell);
    o.require(near30(e.C, pow(fact, 1 / (2 * L)) * sqrt(Z) / sqrt(2 * p * L)), "C for ell=" + std::to_string(ell));
    o.require(near30(e.terms[0].A, L * pow(fact, 1 / L) * Z / (L - 1)), "A_1 for ell=" + std::to_string(ell));
    o.require(e.b == oracle::frac(ell + 1, 2 * ell), "b for ell=" + std::to_string(ell));
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  PrecisionContext ctx(50);
  auto scope = ctx.activate();
  const auto d = lf_data_ntuple(3, ctx);
  const auto closed = two_pole_K(2, 1, *d.c1, *d.c2, 5, ctx);
  const auto series = two_pole_K_series(2, 1, *d.c1, *d.c2, 5, ctx);
  for (unsigned j = 0; j < 5; ++j) {
    o.require(abs(closed[j] - series[j]) < tol30(), "K_" + std::to_string(j + 1) + " differs");
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  PrecisionContext ctx(50);
  auto scope = ctx.activate();
  const Real zero_tol("1e-40");
  for (unsigned ell = 4; ell <= 6; ++ell) {
    const auto data = lf_data_ntuple(ell, ctx);
    const auto saddle = rho_series_three_pole(ell, 6, data, ctx);
    // The error after J terms is led by the first nonzero K_j with j > J.
    auto lead = [&](unsigned J) {
      unsigned j = J;
      while (j + 1 < saddle.K.size() && abs(saddle.K[j]) < zero_tol) ++j;
      return j + 1;
    };
    // err[n_index][J-1]
    std::vector<std::vector<Real>> err;
    for (unsigned long n : {1000ul, 10000ul, 100000ul}) {
      const mpz_class nz(n);
      const Real rho = rho_numeric(ntuple_exponent(ell), nz, ctx);
      std::vector<Real> row;
      for (unsigned J = 1; J <= 4; ++J) row.push_back(abs(rho - rho_partial_sum(saddle, J, nz, ctx)));
      for (unsigned J = 1; J < 4; ++J) {
        const bool k_zero = abs(saddle.K[J]) < zero_tol;
        const std::string at = "ell=" + std::to_string(ell) + " n=" + std::to_string(n) + " J=" + std::to_string(J);
        if (k_zero) {
          // K_{J+1} = 0 leaves the partial sum unchanged.
          o.require(row[J] <= row[J - 1], "error increased at " + at);
        } else {
          o.require(row[J] < row[J - 1], "error did not decrease at " + at);
        }
      }
      err.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < err.size(); ++i) {
      for (unsigned J = 1; J < 4; ++J) {
        const Real decade = pow(Real(10), -Real(lead(J + 1) - lead(J)) / ell);
        const Real f_lo = err[i][J] / err[i][J - 1];
        const Real f_hi = err[i + 1][J] / err[i + 1][J - 1];
        const Real ratio = (f_hi / f_lo) / decade;
        o.require(ratio < 4 && ratio > Real(1) / 4,
                  "improvement factor off at ell=" + std::to_string(ell) + " J=" + std::to_string(J) +
                      " decade " + std::to_string(i) + " (ratio to prediction " + ratio.str(3) + ")");
      }
    }
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  PrecisionContext ctx(50);
  auto scope = ctx.activate();
  for (unsigned ell = 2; ell <= 5; ++ell) {
    const BigIntSeq seq = expand_product(ntuple_exponent(ell), 10000);
    const auto e = expansion_for(lf_data_ntuple(ell, ctx), ctx);
    const auto rows = compare_exact_asym(seq, e, {1000, 10000}, ctx);
    const Real d3 = abs(rows[0].ratio - 1), d4 = abs(rows[1].ratio - 1);
    const std::string tag = "ell=" + std::to_string(ell);
    o.require(d4 < Real("0.05"), tag + " ratio at 1e4 outside 5%");
    o.require(d4 < d3, tag + " error did not shrink");
    const Real s3 = d3 * pow(Real(1000), Real(1) / ell), s4 = d4 * pow(Real(10000), Real(1) / ell);
    o.require(std::max(s3, s4) / std::min(s3, s4) < 4, tag + " scaled error varies by >= 4x");
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  const BigIntSeq p = pentagonal_p(10001);
  o.require(log_concavity_scan(p, 2, 10000).minimal_threshold == 26, "p log-concavity threshold != 26");
  const BigIntSeq n3 = expand_product(ntuple_exponent(3), 10001);
  o.require(log_concavity_scan(n3, 22, 10000).violations.empty(), "N_3 violates log-concavity in [22, 1e4]");

  const auto bo = bessenrodt_ono_scan(p, 200);
  std::string eq;
  for (const auto& [a, b] : bo.equalities) eq += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
  o.require(bo.equalities == std::vector<IndexPair>{{2, 7}}, "BO equality set is " + eq + ", not exactly (2,7)");
  for (const auto& [a, b] : bo.violations) {
    o.require(a == 1 || a + b <= 8, "BO violation outside a=1 or a+b<=8");
  }
  bool domain_ok = true;
  for (const auto& [a, b] : bo.equalities) {
    if (a > 1 && a + b > 8 && !(a == 2 && b == 7)) domain_ok = false;
  }
  o.require(domain_ok, "BO equality other than (2,7) with a,b > 1 and a+b > 8");

  BigIntSeq w = p;
  mpz_class f = 1;
  for (std::size_t n = 1; n < w.size(); ++n) {
    f *= static_cast<unsigned long>(n);
    w.values[n] *= f;
  }
  o.require(log_convexity_scan(w, 2, 10000).violations.empty(), "n! p(n) not log-convex on (1, 1e4]");
  return o;
}

std::string run_cli_capture(std::vector<std::string> args) {
  args.insert(args.begin(), "ntuple");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

Outcome criterion11() {
  Outcome o;
  const std::vector<std::vector<std::string>> parallel{
      {"seq", "--family", "ntuple", "--ell", "5", "--max-n", "3000"},
      {"seq", "--family", "ntuple", "--ell", "3", "--max-n", "2000", "--format", "json"},
      {"logconcave", "--family", "ntuple", "--ell", "2", "--max-n", "5000", "--format", "json"},
      {"logconvex", "--family", "ntuple", "--ell", "3", "--max-n", "2000"},
      {"bo", "--family", "ntuple", "--ell", "2", "--max-sum", "200", "--format", "json"},
      {"compare", "--family", "ntuple", "--ell", "4", "--points", "100,1000,3000"},
  };
  const std::vector<std::vector<std::string>> serial{
      {"constants", "--family", "ntuple", "--ell", "3", "--format", "json"},
      {"constants", "--family", "ntuple", "--ell", "6"},
      {"gl", "--ell", "4", "--max-n", "500"},
      {"oracle", "direct", "--family", "power", "--d", "2", "--max-n", "200"},
  };
  for (const auto& cmd : parallel) {
    const std::string a = run_cli_capture(cmd);
    o.require(a.rfind("0\n", 0) == 0, cmd[0] + " failed");
    o.require(run_cli_capture(cmd) == a, cmd[0] + " differs between runs");
    for (const char* t : {"2", "4"}) {
      auto threaded = cmd;
      threaded.insert(threaded.end(), {"--threads", t});
      o.require(run_cli_capture(threaded) == a, cmd[0] + " differs with --threads " + t);
    }
  }
  for (const auto& cmd : serial) {
    const std::string a = run_cli_capture(cmd);
    o.require(a.rfind("0\n", 0) == 0, cmd[0] + " failed");
    o.require(run_cli_capture(cmd) == a, cmd[0] + " differs between runs");
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0: no runtime bound
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "arithmetic ground truth", 10, criterion1},
      {2, "dual-route subgroup identity", 30, criterion2},
      {3, "exact sequence oracles", 0, criterion3},
      {4, "group-theoretic oracle", 5, criterion4},
      {5, "integrality witness", 0, criterion5},
      {6, "constant reproduction", 60, criterion6},
      {7, "K-coefficient cross-check", 0, criterion7},
      {8, "saddle consistency", 0, criterion8},
      {9, "asymptotic convergence", 300, criterion9},
      {10, "inequality thresholds", 0, criterion10},
      {11, "determinism", 0, criterion11},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0 && secs >= c.budget_seconds) o.require(false, "runtime budget exceeded");
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name << ") [" << timing << "]";
    if (!o.detail.empty()) std::cout << ": " << o.detail;
    std::cout << std::endl;
    if (!o.pass) ++failures;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}

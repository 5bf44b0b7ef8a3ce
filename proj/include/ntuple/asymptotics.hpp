#ifndef NTUPLE_ASYMPTOTICS_HPP
#define NTUPLE_ASYMPTOTICS_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "ntuple/arith.hpp"
#include "ntuple/formal_series.hpp"
#include "ntuple/lfunction.hpp"
#include "ntuple/precision.hpp"
#include "ntuple/saddle.hpp"
#include "ntuple/series.hpp"

namespace ntuple {

enum class ExpansionKind { kOnePole, kTwoPole, kThreePole };

inline const char* to_string(ExpansionKind k) {
  switch (k) {
    case ExpansionKind::kOnePole:
      return "one-pole";
    case ExpansionKind::kTwoPole:
      return "two-pole";
    case ExpansionKind::kThreePole:
      return "three-pole";
  }
  return "?";
}

struct ExpTerm {
  Real A;
  mpq_class lambda;
};

/// p_f(n) ~ C n^{-b} exp(sum_k A_k n^{lambda_k}).
///
/// Terms with lambda = 0 stay in `terms`; C never absorbs them. Use
/// folded_prefactor() for the convention that moves e^{A} into C.
struct AsymptoticExpansion {
  std::string family;
  ExpansionKind kind = ExpansionKind::kOnePole;
  mpq_class alpha;
  Real C;
  mpq_class b;
  std::vector<ExpTerm> terms;  // strictly decreasing lambda
  mpq_class correction_step;   // exponent of the first missing correction n^{-step}
  std::vector<Real> K;         // saddle coefficients (empty for one pole)
};

/// Sorts terms by decreasing exponent, merges equal exponents and checks
/// 0 <= lambda < 1.
inline void normalize(AsymptoticExpansion& e) {
  std::stable_sort(e.terms.begin(), e.terms.end(),
                   [](const ExpTerm& a, const ExpTerm& b) { return a.lambda > b.lambda; });
  std::vector<ExpTerm> merged;
  for (auto& t : e.terms) {
    if (t.lambda < 0 || t.lambda >= 1) {
      throw std::logic_error("expansion exponent outside [0, 1): " + format_rational(t.lambda));
    }
    if (!merged.empty() && merged.back().lambda == t.lambda) {
      merged.back().A += t.A;
    } else {
      merged.push_back(std::move(t));
    }
  }
  e.terms = std::move(merged);
}

/// C e^{sum of A_k with lambda_k = 0}.
inline Real folded_prefactor(const AsymptoticExpansion& e) {
  Real s = 0;
  for (const auto& t : e.terms) {
    if (t.lambda == 0) s += t.A;
  }
  return e.C * exp(s);
}

namespace detail {

/// Shared Thm-2.1 constants from c1 = omega_alpha Gamma(alpha+1) zeta(alpha+1).
inline void set_prefactor(AsymptoticExpansion& e, const LSeriesData& data, const Real& c1,
                          const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  const Real a1 = to_real(data.alpha) + 1;
  e.C = exp(data.l_prime_at_zero) * pow(c1, (Real(1) / 2 - data.l_at_zero) / a1) /
        sqrt(2 * pi(ctx) * a1);
  e.b = (1 - data.l_at_zero_exact + data.alpha / 2) / (data.alpha + 1);
  e.b.canonicalize();
}

inline bool close(const Real& a, const Real& b, const PrecisionContext& ctx, int guard = 10) {
  const Real scale = std::max(Real(1), std::max(abs(a), abs(b)));
  return abs(a - b) <= ctx.epsilon_power(static_cast<int>(ctx.digits()) - guard) * scale;
}

/// Multiplicity vectors (m_0, m_1, ..., m_W) with sum m_j = parts and
/// sum j m_j = weight; visit receives the vector and the multinomial
/// parts! / prod m_j!.
inline void for_each_weighted_composition(
    unsigned parts, unsigned weight,
    const std::function<void(const std::vector<unsigned>&, const mpz_class&)>& visit) {
  for_each_partition(weight, parts, [&](const std::vector<unsigned>& mult) {
    unsigned used = 0;
    for (unsigned j = 1; j < mult.size(); ++j) used += mult[j];
    std::vector<unsigned> m(weight + 1, 0);
    m[0] = parts - used;
    for (unsigned j = 1; j < mult.size(); ++j) m[j] = mult[j];
    mpz_class multinomial = factorial(parts);
    for (unsigned v : m) multinomial /= factorial(v);
    visit(m, multinomial);
  });
}

}  // namespace detail

// ---------------------------------------------------------------------------
// One pole

inline AsymptoticExpansion expansion_one_pole(const LSeriesData& data, const PrecisionContext& ctx) {
  if (data.poles.size() != 1) throw std::invalid_argument("expansion_one_pole requires exactly one pole");
  auto scope = ctx.activate();
  AsymptoticExpansion e;
  e.family = describe(data.family);
  e.kind = ExpansionKind::kOnePole;
  e.alpha = data.alpha;
  const Real c1 = pole_weight(data.poles[0], ctx);
  const Real a = to_real(data.alpha);
  e.terms.push_back({(1 + 1 / a) * pow(c1, 1 / (a + 1)), data.alpha / (data.alpha + 1)});
  // A single-term saddle equation has an exact monomial root, so every
  // lower exponent carries a zero coefficient.
  if (data.alpha.get_den() == 1) {
    const unsigned top = static_cast<unsigned>(data.alpha.get_num().get_ui()) + 1;
    for (unsigned k = 2; k <= top; ++k) {
      e.terms.push_back({Real(0), mpq_class(top - k, top)});
    }
  }
  for (auto& t : e.terms) t.lambda.canonicalize();
  e.correction_step = 1 / (data.alpha + 1);
  e.correction_step.canonicalize();
  detail::set_prefactor(e, data, c1, ctx);
  normalize(e);
  return e;
}

// ---------------------------------------------------------------------------
// Two poles

/// The multi-index sums of the two-pole A_k formula (k >= 3).
inline Real two_pole_A(unsigned k, unsigned lambda, const mpq_class& alpha, const mpq_class& beta,
                       const Real& c1, const Real& c2, const std::vector<Real>& K,
                       const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  const Real a = to_real(alpha);
  const Real b = to_real(beta);
  const Real inv = 1 / (a + 1);

  // sum_m binom(-s, m) sum_{j: |j| = m, sum i j_i = weight} multinom K_2^{j_1} ... / c1^{m/(alpha+1)}
  auto block = [&](const Real& s, unsigned weight) {
    Real total = 0;
    if (weight == 0) return total;
    for_each_partition(weight, lambda, [&](const std::vector<unsigned>& j) {
      unsigned m = 0;
      for (unsigned i = 1; i < j.size(); ++i) {
        if (j[i] != 0 && i > lambda) return;
        m += j[i];
      }
      mpz_class multinomial = factorial(m);
      Real product = 1;
      for (unsigned i = 1; i < j.size(); ++i) {
        multinomial /= factorial(j[i]);
        for (unsigned r = 0; r < j[i]; ++r) product *= K.at(i);
      }
      total += detail::real_binomial(-s, m) * to_real(multinomial) * product / pow(c1, Real(m) * inv);
    });
    return total;
  };
  return K.at(k - 1) + pow(c1, inv) / a * block(a, k - 1) +
         c2 / (b * pow(c1, b * inv)) * block(b, k - 2);
}

inline AsymptoticExpansion expansion_two_pole(const LSeriesData& data, const PrecisionContext& ctx) {
  if (data.poles.size() != 2) throw std::invalid_argument("expansion_two_pole requires exactly two poles");
  auto scope = ctx.activate();
  const mpq_class alpha = data.poles[0].position;
  const mpq_class beta = data.poles[1].position;
  const unsigned lambda = two_pole_lambda(alpha, beta);
  const Real c1 = pole_weight(data.poles[0], ctx);
  const Real c2 = pole_weight(data.poles[1], ctx);
  const Real a = to_real(alpha);
  const Real b = to_real(beta);

  AsymptoticExpansion e;
  e.family = describe(data.family);
  e.kind = ExpansionKind::kTwoPole;
  e.alpha = alpha;
  const unsigned kmax = lambda + 1;
  e.K = kmax <= kMaxTwoPoleClosedTerms ? two_pole_K(alpha, beta, c1, c2, kmax, ctx)
                                       : two_pole_K_series(alpha, beta, c1, c2, kmax, ctx);

  auto exponent = [&](unsigned k) {
    mpq_class l = ((k - 1) * beta - mpq_class(static_cast<long>(k) - 2) * alpha) / (alpha + 1);
    l.canonicalize();
    return l;
  };
  e.terms.push_back({pow(c1, 1 / (a + 1)) * (1 + 1 / a), exponent(1)});
  e.terms.push_back({c2 / b / pow(c1, b / (a + 1)), exponent(2)});
  for (unsigned k = 3; k <= kmax; ++k) {
    e.terms.push_back({two_pole_A(k, lambda, alpha, beta, c1, c2, e.K, ctx), exponent(k)});
  }

  // Independent assembly: with y = x^{alpha-beta} the exponent is
  // x^{-alpha} [u + (c1/alpha) u^{-alpha} + (c2/beta) y u^{-beta}].
  {
    Series<Real> u(std::vector<Real>(e.K.begin(), e.K.end()));
    Series<Real> y(kmax);
    if (kmax > 1) y.at(1) = 1;
    const Series<Real> g = u + u.real_pow(-a) * (c1 / a) + y * u.real_pow(-b) * (c2 / b);
    for (unsigned k = 1; k <= kmax; ++k) {
      if (!detail::close(g[k - 1], e.terms[k - 1].A, ctx)) {
        throw std::logic_error("expansion_two_pole: A_" + std::to_string(k) +
                               " disagrees between the closed sum and series assembly");
      }
    }
  }

  e.correction_step = std::min(mpq_class(1), mpq_class(alpha - beta)) / (alpha + 1);
  e.correction_step.canonicalize();
  detail::set_prefactor(e, data, c1, ctx);
  normalize(e);
  return e;
}

// ---------------------------------------------------------------------------
// Three poles (N_ell, ell >= 4)

/// D_0..D_{count-1} of 1/rho = n^{1/ell} sum_m D_m n^{-m/ell}:
/// D_m = C_1^{-1/ell} sum_{j_1 + 2 j_2 + ... = m} (-1)^{|j|} binom(|j|; j)
///       C_1^{-|j|/ell} K_2^{j_1} K_3^{j_2} ...
inline std::vector<Real> reciprocal_saddle_coefficients(unsigned ell, const Real& c1,
                                                        const std::vector<Real>& K, unsigned count,
                                                        const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  const Real root = pow(c1, Real(1) / Real(ell));
  std::vector<Real> D;
  for (unsigned m = 0; m < count; ++m) {
    Real sum = 0;
    if (m == 0) sum = 1;
    for_each_partition(m, m, [&](const std::vector<unsigned>& j) {
      if (m == 0) return;
      unsigned total = 0;
      for (unsigned i = 1; i < j.size(); ++i) total += j[i];
      mpz_class multinomial = factorial(total);
      Real product = 1;
      for (unsigned i = 1; i < j.size(); ++i) {
        multinomial /= factorial(j[i]);
        for (unsigned r = 0; r < j[i]; ++r) product *= K.at(i) / root;
      }
      const Real term = to_real(multinomial) * product;
      sum += total % 2 == 0 ? term : Real(-term);
    });
    D.push_back(sum / root);
  }
  return D;
}

/// A_{ell,k} = K_k + sum_{i=1}^{3} C_i/(ell-i) sum binom(ell-i; m) D_0^{m_0} D_1^{m_1} ...
/// over multiplicities with sum m_j = ell - i and sum j m_j = k - i.
inline Real three_pole_A(unsigned ell, unsigned k, const std::vector<Real>& C,
                         const std::vector<Real>& K, const std::vector<Real>& D,
                         const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  Real a = K.at(k - 1);
  for (unsigned i = 1; i <= 3; ++i) {
    if (k < i) continue;
    Real block = 0;
    detail::for_each_weighted_composition(
        ell - i, k - i, [&](const std::vector<unsigned>& m, const mpz_class& multinomial) {
          Real product = to_real(multinomial);
          for (unsigned j = 0; j < m.size(); ++j) {
            for (unsigned r = 0; r < m[j]; ++r) product *= D.at(j);
          }
          block += product;
        });
    a += C[i - 1] / Real(ell - i) * block;
  }
  return a;
}

inline AsymptoticExpansion expansion_three_pole(unsigned ell, const LSeriesData& data,
                                                const PrecisionContext& ctx) {
  if (ell < 4) throw std::invalid_argument("expansion_three_pole requires ell >= 4");
  if (data.poles.size() != 3 || !data.c1 || !data.c2 || !data.c3) {
    throw std::invalid_argument("expansion_three_pole requires three-pole data");
  }
  auto scope = ctx.activate();
  const SaddleExpansion saddle = rho_series_three_pole(ell, ell, data, ctx);
  const std::vector<Real> C{*data.c1, *data.c2, *data.c3};
  const std::vector<Real> D = reciprocal_saddle_coefficients(ell, C[0], saddle.K, ell, ctx);

  AsymptoticExpansion e;
  e.family = describe(data.family);
  e.kind = ExpansionKind::kThreePole;
  e.alpha = data.alpha;
  e.K = saddle.K;
  for (unsigned k = 1; k <= ell; ++k) {
    e.terms.push_back({three_pole_A(ell, k, C, saddle.K, D, ctx), mpq_class(ell - k, ell)});
  }
  for (auto& t : e.terms) t.lambda.canonicalize();

  // Independent assembly as series in x = n^{-1/ell}:
  // n rho + Phi(rho) = x^{-(ell-1)} [u + sum_i C_i/(ell-i) x^{i-1} u^{-(ell-i)}].
  {
    const Series<Real> u(saddle.K);
    const Series<Real> inv = u.inverse();
    Series<Real> g = u;
    for (unsigned i = 1; i <= 3; ++i) {
      Series<Real> shift(ell);
      shift.at(i - 1) = C[i - 1] / Real(ell - i);
      g += shift * inv.pow(ell - i);
    }
    for (unsigned k = 1; k <= ell; ++k) {
      if (!detail::close(g[k - 1], e.terms[k - 1].A, ctx)) {
        throw std::logic_error("expansion_three_pole: A_" + std::to_string(k) +
                               " disagrees between the composition sums and series assembly");
      }
    }
  }

  // A_{ell,1} three ways.
  {
    Real zeta_prod = 1;  // zeta(2) ... zeta(ell-1)
    for (unsigned m = 2; m < ell; ++m) zeta_prod *= zeta_int(m, ctx);
    const Real zl = zeta_int(ell, ctx);
    const Real L = Real(ell);
    const Real via_a1 = (1 + 1 / (L - 1)) * pow(zeta_prod * factorial_real(ell - 1, ctx) * zl, 1 / L);
    const Real z_ell = pow(zeta_prod * zl, 1 / L);
    const Real via_main = L * pow(factorial_real(ell - 1, ctx), 1 / L) * z_ell / (L - 1);
    const Real via_c1 = (1 + 1 / to_real(data.alpha)) * pow(C[0], 1 / L);
    if (std::holds_alternative<SubgroupCount>(data.family) &&
        (!detail::close(via_a1, e.terms[0].A, ctx) || !detail::close(via_main, e.terms[0].A, ctx) ||
         !detail::close(via_c1, e.terms[0].A, ctx))) {
      throw std::logic_error("expansion_three_pole: leading coefficient mismatch");
    }
  }

  e.correction_step = mpq_class(1, ell);
  detail::set_prefactor(e, data, C[0], ctx);
  normalize(e);
  return e;
}

/// Dispatches on the number of positive poles.
inline AsymptoticExpansion expansion_for(const LSeriesData& data, const PrecisionContext& ctx) {
  switch (data.poles.size()) {
    case 1:
      return expansion_one_pole(data, ctx);
    case 2:
      return expansion_two_pole(data, ctx);
    case 3: {
      const auto* s = std::get_if<SubgroupCount>(&data.family);
      if (s == nullptr) throw std::invalid_argument("three-pole expansions exist for N_ell only");
      return expansion_three_pole(s->rank + 1, data, ctx);
    }
    default:
      throw std::invalid_argument("unsupported pole configuration");
  }
}

// ---------------------------------------------------------------------------
// Evaluation and comparison

/// C n^{-b} exp(sum_k A_k n^{lambda_k}).
inline Real evaluate_expansion(const AsymptoticExpansion& e, const mpz_class& n,
                               const PrecisionContext& ctx) {
  if (n < 1) throw std::domain_error("evaluate_expansion requires n >= 1");
  auto scope = ctx.activate();
  const Real nr = to_real(n);
  Real exponent = 0;
  for (const auto& t : e.terms) exponent += t.A * pow_rational(nr, t.lambda);
  return e.C * exp(exponent - to_real(e.b) * log(nr));
}

struct ComparisonRow {
  std::size_t n;
  std::string exact;
  Real asym;
  Real ratio;      // exact / asym
  Real log_error;  // log(exact) - log(asym)
};

inline std::vector<ComparisonRow> compare_exact_asym(const BigIntSeq& seq, const AsymptoticExpansion& e,
                                                     const std::vector<std::size_t>& points,
                                                     const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  std::vector<ComparisonRow> rows;
  for (std::size_t n : points) {
    if (n < 1 || n > seq.max_index()) {
      throw std::out_of_range("compare_exact_asym: point " + std::to_string(n) + " outside the table");
    }
    const mpz_class& exact = seq[n];
    const Real asym = evaluate_expansion(e, mpz_class(static_cast<unsigned long>(n)), ctx);
    const Real ratio = to_real(exact) / asym;
    rows.push_back({n, exact.get_str(), asym, ratio, log(ratio)});
  }
  return rows;
}

inline constexpr std::size_t kMinFitPoints = 10;

struct CorrectionFit {
  Real B1;
  Real B2;
  std::size_t points;
};

/// Least-squares fit of (exact/asym - 1) n^{theta} = B1 + B2 n^{-theta}
/// over n in [lo, hi], theta the expansion's correction step. Empirical:
/// the fitted B1 is an estimate, not a derived constant.
inline CorrectionFit fit_correction(const BigIntSeq& seq, const AsymptoticExpansion& e,
                                    std::size_t lo, std::size_t hi, const PrecisionContext& ctx) {
  if (hi > seq.max_index() || lo < 1 || lo > hi) {
    throw std::out_of_range("fit_correction: window outside the table");
  }
  if (hi - lo + 1 < kMinFitPoints) {
    throw std::invalid_argument("fit_correction: window needs at least " +
                                std::to_string(kMinFitPoints) + " points");
  }
  auto scope = ctx.activate();
  const Real theta = to_real(e.correction_step);
  Real s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (std::size_t n = lo; n <= hi; ++n) {
    const mpz_class nz(static_cast<unsigned long>(n));
    const Real nr = to_real(nz);
    const Real y = (to_real(seq[n]) / evaluate_expansion(e, nz, ctx) - 1) * pow(nr, theta);
    const Real x = pow(nr, -theta);
    s0 += 1;
    s1 += x;
    s2 += x * x;
    t0 += y;
    t1 += x * y;
  }
  const Real det = s0 * s2 - s1 * s1;
  return {(t0 * s2 - s1 * t1) / det, (s0 * t1 - s1 * t0) / det, hi - lo + 1};
}

inline Real estimate_B1(const BigIntSeq& seq, const AsymptoticExpansion& e, std::size_t lo,
                        std::size_t hi, const PrecisionContext& ctx) {
  return fit_correction(seq, e, lo, hi, ctx).B1;
}

}  // namespace ntuple

#endif  // NTUPLE_ASYMPTOTICS_HPP

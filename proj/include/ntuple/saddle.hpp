#ifndef NTUPLE_SADDLE_HPP
#define NTUPLE_SADDLE_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <gmpxx.h>

#include "ntuple/arith.hpp"
#include "ntuple/formal_series.hpp"
#include "ntuple/lfunction.hpp"
#include "ntuple/precision.hpp"

namespace ntuple {

/// K_1..K_J of rho_n = sum_j K_j n^{-j/ell}.
struct SaddleExpansion {
  unsigned ell = 0;
  std::vector<Real> K;
};

/// One term c * y^{y_degree} * z^{power} of a saddle equation
/// 1 = sum_i c_i y^{e_i} z^{p_i} with z = 1/u.
struct SaddleTerm {
  Real c;
  unsigned y_degree;
  Real power;
};

namespace detail {

/// Generalized binomial coefficient p (p-1) ... (p-k+1) / k!.
inline Real real_binomial(const Real& p, unsigned k) {
  Real r = 1;
  for (unsigned i = 0; i < k; ++i) {
    r *= p - Real(i);
    r /= Real(i + 1);
  }
  return r;
}

}  // namespace detail

/// Solves 1 = sum_i c_i y^{e_i} u^{-p_i} for u(y) = K_1 + K_2 y + ... as a
/// formal series truncated at `order` coefficients.
///
/// terms[0] is the dominant term (e_0 = 0, c_0 > 0); every other term must
/// carry a positive power of y. Writing z = 1/u = z_0 + w with
/// z_0 = c_0^{-1/p_0}, the equation becomes sum_k a_k(y) w^k = 0 with
/// a_k(y) = sum_i c_i binom(p_i, k) z_0^{p_i - k} y^{e_i} - [k = 0].
/// Since a_0(0) = 0 and a_1(0) != 0, w = psi_y(-a_0(y)) where psi_y is the
/// compositional inverse of w -> sum_{k>=1} a_k(y) w^k over the ring of
/// truncated series in y.
inline Series<Real> saddle_root_series(const std::vector<SaddleTerm>& terms, std::size_t order,
                                       const PrecisionContext& ctx,
                                       InversionMethod method = InversionMethod::kNewton) {
  if (terms.empty() || order < 1) throw std::invalid_argument("saddle_root_series: empty input");
  if (terms[0].y_degree != 0 || !(terms[0].c > 0) || !(terms[0].power > 0)) {
    throw std::invalid_argument("saddle_root_series: leading term must be c z^p with c, p > 0");
  }
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].y_degree == 0) {
      throw std::invalid_argument("saddle_root_series: correction terms need a positive y-degree");
    }
  }
  auto scope = ctx.activate();
  const std::size_t n = order;
  const Real z0 = boost::multiprecision::pow(terms[0].c, -Real(1) / terms[0].power);

  using YSeries = Series<Real>;
  Series<YSeries> phi(n + 1);
  YSeries a0(n);
  for (std::size_t k = 0; k <= n; ++k) {
    YSeries ak(n);
    for (const auto& t : terms) {
      if (t.y_degree >= n) continue;
      const Real coeff = t.c * detail::real_binomial(t.power, static_cast<unsigned>(k)) *
                         boost::multiprecision::pow(z0, t.power - Real(static_cast<unsigned long>(k)));
      ak.at(t.y_degree) += coeff;
    }
    if (k == 0) {
      ak.at(0) = 0;  // c_0 z_0^{p_0} - 1 vanishes by the choice of z_0
      a0 = ak;
    } else {
      phi.at(k) = ak;
    }
  }
  phi.at(0) = YSeries(n);

  const Series<YSeries> psi = lagrange_invert(phi, n, method);
  const YSeries t = -a0;
  YSeries w(n);
  YSeries t_pow = YSeries::constant(Real(1), n);
  for (std::size_t k = 1; k <= n; ++k) {
    t_pow = (t_pow * t).truncated(n);
    w += (psi[k] * t_pow).truncated(n);
  }
  YSeries z = w;
  z.at(0) += z0;
  return z.inverse();
}

// ---------------------------------------------------------------------------
// Three-pole saddle (ell >= 4)

inline constexpr unsigned kMaxSaddleTerms = 24;

/// K_{ell,1..J} from -Phi'(rho) = C_1 rho^{-ell} + C_2 rho^{-(ell-1)} + C_3 rho^{-(ell-2)} = n.
/// With x = n^{-1/ell} and rho = x u(x) this is
/// 1 = C_1 u^{-ell} + C_2 x u^{-(ell-1)} + C_3 x^2 u^{-(ell-2)}.
/// All series arithmetic is truncated at order J + 2 in x.
inline SaddleExpansion rho_series_three_pole(unsigned ell, unsigned J, const LSeriesData& data,
                                             const PrecisionContext& ctx,
                                             InversionMethod method = InversionMethod::kNewton) {
  if (ell < 4) throw std::invalid_argument("rho_series_three_pole requires ell >= 4");
  if (!data.c1 || !data.c2 || !data.c3) {
    throw std::invalid_argument("rho_series_three_pole requires C_1, C_2, C_3");
  }
  if (J < 1 || J > kMaxSaddleTerms) {
    throw std::out_of_range("rho_series_three_pole: J must lie in 1.." +
                            std::to_string(kMaxSaddleTerms));
  }
  auto scope = ctx.activate();
  const std::vector<SaddleTerm> terms{
      {*data.c1, 0, Real(ell)},
      {*data.c2, 1, Real(ell - 1)},
      {*data.c3, 2, Real(ell - 2)},
  };
  const Series<Real> u = saddle_root_series(terms, J + 2, ctx, method);
  SaddleExpansion out{ell, {}};
  for (unsigned j = 0; j < J; ++j) out.K.push_back(u[j]);

  const Real k1 = boost::multiprecision::pow(*data.c1, Real(1) / Real(ell));
  if (abs(out.K[0] - k1) > ctx.epsilon_power(static_cast<int>(ctx.digits()) - 10) * k1) {
    throw std::logic_error("rho_series_three_pole: K_1 != C_1^{1/ell}");
  }
  return out;
}

/// sum_{j <= J} K_j n^{-j/ell}.
inline Real rho_partial_sum(const SaddleExpansion& e, unsigned J, const mpz_class& n,
                            const PrecisionContext& ctx) {
  if (J > e.K.size()) throw std::out_of_range("rho_partial_sum: J beyond computed terms");
  auto scope = ctx.activate();
  const Real x = boost::multiprecision::pow(to_real(n), -Real(1) / Real(e.ell));
  Real sum = 0;
  Real xp = 1;
  for (unsigned j = 0; j < J; ++j) {
    xp *= x;
    sum += e.K[j] * xp;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Two-pole saddle

/// The integer lambda >= 1 with (lambda+1)/lambda * beta < alpha <= lambda/(lambda-1) * beta.
inline unsigned two_pole_lambda(const mpq_class& alpha, const mpq_class& beta) {
  if (!(beta > 0) || !(alpha > beta)) {
    throw std::domain_error("two-pole data requires alpha > beta > 0");
  }
  const mpq_class ratio = beta / (alpha - beta);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  const mpz_class lambda = fl + 1;
  // Guard the interval explicitly rather than trusting the floor.
  const mpq_class l(lambda);
  if (!((l + 1) / l * beta < alpha) || (l > 1 && !(alpha <= l / (l - 1) * beta))) {
    throw std::domain_error("two-pole admissibility condition fails");
  }
  return static_cast<unsigned>(lambda.get_ui());
}

inline constexpr unsigned kMaxTwoPoleClosedTerms = 5;

/// Closed forms K_1..K_J (J <= 5) for rho_n = sum_j K_j n^{-(1 + (j-1)(alpha-beta))/(alpha+1)}.
inline std::vector<Real> two_pole_K(const mpq_class& alpha, const mpq_class& beta, const Real& c1,
                                    const Real& c2, unsigned J, const PrecisionContext& ctx) {
  if (J < 1 || J > kMaxTwoPoleClosedTerms) {
    throw std::out_of_range("two_pole_K: J must lie in 1..5");
  }
  if (!(c1 > 0)) throw std::domain_error("two_pole_K requires c1 > 0");
  two_pole_lambda(alpha, beta);
  auto scope = ctx.activate();
  const Real a = to_real(alpha);
  const Real b = to_real(beta);
  const Real a1 = a + 1;
  auto c1_pow = [&](const Real& num) { return boost::multiprecision::pow(c1, num / a1); };

  std::vector<Real> K;
  K.push_back(c1_pow(Real(1)));
  if (J >= 2) K.push_back(c2 / (a1 * c1_pow(b)));
  if (J >= 3) {
    K.push_back(c2 * c2 * (a - 2 * b) / (2 * a1 * a1 * c1_pow(2 * b + 1)));
  }
  if (J >= 4) {
    const Real poly = 2 * a * a - 9 * a * b - 2 * a + 9 * b * b + 3 * b;
    K.push_back(pow(c2, 3) * poly / (6 * pow(a1, 3) * c1_pow(3 * b + 2)));
  }
  if (J >= 5) {
    const Real poly = 6 * pow(a, 3) - 44 * a * a * b - 15 * a * a + 96 * a * b * b + 56 * a * b +
                      6 * a - 64 * pow(b, 3) - 48 * b * b - 8 * b;
    K.push_back(pow(c2, 4) * poly / (24 * pow(a1, 4) * c1_pow(4 * b + 3)));
  }
  return K;
}

/// Same K_j via the generic inversion: with x = n^{-1/(alpha+1)},
/// y = x^{alpha-beta} and rho = x u(y), the saddle equation reads
/// 1 = c1 u^{-(alpha+1)} + c2 y u^{-(beta+1)}.
inline std::vector<Real> two_pole_K_series(const mpq_class& alpha, const mpq_class& beta,
                                           const Real& c1, const Real& c2, unsigned J,
                                           const PrecisionContext& ctx,
                                           InversionMethod method = InversionMethod::kNewton) {
  if (J < 1 || J > kMaxSaddleTerms) throw std::out_of_range("two_pole_K_series: J out of range");
  two_pole_lambda(alpha, beta);
  auto scope = ctx.activate();
  const std::vector<SaddleTerm> terms{
      {c1, 0, to_real(alpha) + 1},
      {c2, 1, to_real(beta) + 1},
  };
  const Series<Real> u = saddle_root_series(terms, J + 2, ctx, method);
  std::vector<Real> K;
  for (unsigned j = 0; j < J; ++j) K.push_back(u[j]);
  return K;
}

// ---------------------------------------------------------------------------
// Direct evaluation of Phi_f and the numeric saddle

namespace detail {

/// Lazily extended table of f(1..M) for one spec.
class ExponentCache {
 public:
  explicit ExponentCache(ExponentSpec spec) : spec_(std::move(spec)) {
    validate(spec_);
    if (const auto* t = std::get_if<Table>(&spec_)) {
      finite_ = t->values.size();
      bool any = false;
      for (const auto& v : t->values) any = any || v != 0;
      if (!any) throw std::domain_error("exponent function is identically zero");
    }
  }

  const IntTable& upto(std::size_t m) {
    if (finite_) m = *finite_;
    if (table_length(table_) < m) table_ = evaluate_exponent(spec_, m);
    return table_;
  }

  std::optional<std::size_t> finite_support() const { return finite_; }
  int degree() const { return exponent_majorant_degree(spec_); }

 private:
  ExponentSpec spec_;
  IntTable table_;
  std::optional<std::size_t> finite_;
};

/// Upper bound for sum_{m > M} m^k q^m / (1 - q^m)^s, 0 < q < 1, by a
/// geometric series on the ratio of consecutive terms.
inline Real tail_majorant(std::size_t M, int k, unsigned s, const Real& q) {
  const Real m1 = Real(static_cast<unsigned long>(M + 1));
  const Real ratio = pow((m1 + 1) / m1, k) * q;
  if (!(ratio < 1)) return Real(-1);  // no bound yet
  const Real qm = pow(q, m1);
  const Real first = pow(m1, k) * qm / pow(1 - qm, s);
  return first / (1 - ratio);
}

enum class PhiKind { kPhi, kMinusPhiPrime, kPhiSecond };

/// Sums the requested series with a certified tail below rel_tol times the
/// partial sum. Terms per m:
///   Phi:      -f(m) log(1 - q^m)        (<= f(m) q^m / (1 - q^m))
///   -Phi':     m f(m) q^m / (1 - q^m)
///   Phi'':     m^2 f(m) q^m / (1 - q^m)^2
inline Real phi_sum(ExponentCache& cache, const Real& z, PhiKind kind, const Real& rel_tol) {
  const Real q = exp(-z);
  const int deg = cache.degree();
  const int k = deg + (kind == PhiKind::kPhi ? 0 : kind == PhiKind::kMinusPhiPrime ? 1 : 2);
  const unsigned s = kind == PhiKind::kPhiSecond ? 2u : 1u;

  std::size_t M = 64;
  for (;;) {
    const IntTable& f = cache.upto(M);
    const std::size_t top = cache.finite_support() ? *cache.finite_support() : M;
    Real sum = 0;
    Real qm = 1;
    for (std::size_t m = 1; m <= top; ++m) {
      qm *= q;
      if (f[m] == 0) continue;
      const Real fm = to_real(f[m]);
      const Real mr = Real(static_cast<unsigned long>(m));
      switch (kind) {
        case PhiKind::kPhi:
          sum -= fm * log1p(-qm);
          break;
        case PhiKind::kMinusPhiPrime:
          sum += mr * fm * qm / (1 - qm);
          break;
        case PhiKind::kPhiSecond:
          sum += mr * mr * fm * qm / ((1 - qm) * (1 - qm));
          break;
      }
    }
    if (cache.finite_support()) return sum;
    const Real tail = tail_majorant(M, k, s, q);
    if (tail >= 0 && tail <= rel_tol * sum) return sum;
    M *= 2;
  }
}

}  // namespace detail

/// Phi_f(z) = sum_{m,j} f(m) e^{-zmj} / j = -sum_m f(m) log(1 - e^{-mz}).
inline Real phi_eval(const ExponentSpec& spec, const Real& z, const PrecisionContext& ctx) {
  if (!(z > 0)) throw std::domain_error("phi_eval requires z > 0");
  const PrecisionContext work = ctx.widened(10);
  auto scope = work.activate();
  detail::ExponentCache cache(spec);
  const Real r = detail::phi_sum(cache, rounded(z, work), detail::PhiKind::kPhi,
                                 work.epsilon_power(static_cast<int>(ctx.digits()) + 2));
  return rounded(r, ctx);
}

/// Phi_f'(z) = -sum_m m f(m) e^{-mz} / (1 - e^{-mz}).
inline Real phi_deriv_eval(const ExponentSpec& spec, const Real& z, const PrecisionContext& ctx) {
  if (!(z > 0)) throw std::domain_error("phi_deriv_eval requires z > 0");
  const PrecisionContext work = ctx.widened(10);
  auto scope = work.activate();
  detail::ExponentCache cache(spec);
  const Real r = detail::phi_sum(cache, rounded(z, work), detail::PhiKind::kMinusPhiPrime,
                                 work.epsilon_power(static_cast<int>(ctx.digits()) + 2));
  return rounded(-r, ctx);
}

/// The unique rho > 0 with -Phi_f'(rho) = n, to relative accuracy
/// 10^{-(digits-10)}. -Phi_f' is strictly decreasing from +inf to 0, so the
/// root is bracketed by halving/doubling, narrowed by bisection and polished
/// by safeguarded Newton steps.
inline Real rho_numeric(const ExponentSpec& spec, const mpz_class& n, const PrecisionContext& ctx) {
  if (n <= 0) throw std::domain_error("rho_numeric requires n >= 1");
  const PrecisionContext work = ctx.widened(10);
  auto scope = work.activate();
  detail::ExponentCache cache(spec);
  const Real target = to_real(n);
  const Real sum_tol = work.epsilon_power(static_cast<int>(ctx.digits()) + 2);
  auto g = [&](const Real& z) {
    return detail::phi_sum(cache, z, detail::PhiKind::kMinusPhiPrime, sum_tol) - target;
  };

  Real lo = 1, hi = 1;
  if (g(lo) > 0) {
    do hi *= 2; while (g(hi) > 0);
    lo = hi / 2;
  } else {
    do lo /= 2; while (g(lo) < 0);
    hi = lo * 2;
  }
  // g(lo) > 0 > g(hi)
  for (int i = 0; i < 20; ++i) {
    const Real mid = (lo + hi) / 2;
    (g(mid) > 0 ? lo : hi) = mid;
  }

  const Real tol = work.epsilon_power(static_cast<int>(ctx.digits()) - 10) / 100;
  Real z = (lo + hi) / 2;
  for (int iter = 0; iter < 200; ++iter) {
    const Real gz = g(z);
    if (gz == 0) break;
    (gz > 0 ? lo : hi) = z;
    const Real slope = -detail::phi_sum(cache, z, detail::PhiKind::kPhiSecond, sum_tol);
    Real next = z - gz / slope;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    const bool done = abs(next - z) <= tol * z;
    z = next;
    if (done) break;
  }
  return rounded(z, ctx);
}

}  // namespace ntuple

#endif  // NTUPLE_SADDLE_HPP

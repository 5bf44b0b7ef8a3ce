#ifndef NTUPLE_PRECISION_HPP
#define NTUPLE_PRECISION_HPP

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>

namespace ntuple {

/// Arbitrary-precision real scalar. Precision is taken from the active
/// PrecisionContext at construction time.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

/// Decimal working precision for all real-valued computations.
///
/// Activating a context sets the default precision for newly created Reals
/// until the returned scope is destroyed. Contexts are immutable values;
/// the active precision is process-wide, so Real arithmetic is expected to
/// run on a single thread (exact integer code paths may run in parallel).
class PrecisionContext {
 public:
  static constexpr unsigned kDefaultDigits = 50;
  static constexpr unsigned kMinDigits = 50;

  class Scope {
   public:
    explicit Scope(unsigned digits) : saved_(Real::default_precision()) {
      Real::default_precision(digits);
    }
    ~Scope() { Real::default_precision(saved_); }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    unsigned saved_;
  };

  explicit PrecisionContext(unsigned digits = kDefaultDigits) : digits_(digits) {
    if (digits < kMinDigits) {
      throw std::invalid_argument("precision must be at least " + std::to_string(kMinDigits) +
                                  " decimal digits");
    }
  }

  unsigned digits() const noexcept { return digits_; }

  /// Context with `extra` guard digits on top of this one.
  PrecisionContext widened(unsigned extra) const { return PrecisionContext(digits_ + extra); }

  [[nodiscard]] Scope activate() const { return Scope(digits_); }

  /// 10^{-exponent} at this context's precision.
  Real epsilon_power(int exponent) const {
    auto scope = activate();
    return boost::multiprecision::pow(Real(10), -exponent);
  }

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  unsigned digits_;
};

// ---------------------------------------------------------------------------
// Exact-to-real promotion

inline Real to_real(const mpz_class& z) {
  Real r;
  mpfr_set_z(r.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return r;
}

inline Real to_real(const mpq_class& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return r;
}

inline Real to_real(const mpz_class& z, const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  return to_real(z);
}

inline Real to_real(const mpq_class& q, const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  return to_real(q);
}

/// Copy of x rounded to the precision of ctx.
inline Real rounded(const Real& x, const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  Real r;
  mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
  return r;
}

inline Real pi(const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  Real r;
  mpfr_const_pi(r.backend().data(), MPFR_RNDN);
  return r;
}

inline Real euler_gamma(const PrecisionContext& ctx) {
  auto scope = ctx.activate();
  Real r;
  mpfr_const_euler(r.backend().data(), MPFR_RNDN);
  return r;
}

/// Real power with a rational exponent, x > 0.
inline Real pow_rational(const Real& x, const mpq_class& e) {
  if (e == 0) return Real(1);
  return boost::multiprecision::pow(x, to_real(e));
}

/// Decimal rendering with `digits` significant digits (scientific notation).
inline std::string format_real(const Real& x, unsigned digits) {
  return x.str(static_cast<std::streamsize>(digits), std::ios_base::scientific);
}

inline std::string format_rational(const mpq_class& q) {
  mpq_class c = q;
  c.canonicalize();
  return c.get_str();
}

// ---------------------------------------------------------------------------
// Exact combinatorial helpers

inline mpz_class factorial(unsigned n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline mpz_class binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

namespace detail {

struct BernoulliCache {
  std::mutex mutex;
  std::vector<mpq_class> values{mpq_class(1)};
};

inline BernoulliCache& bernoulli_cache() {
  static BernoulliCache cache;
  return cache;
}

}  // namespace detail

/// Bernoulli number B_n as an exact rational, convention B_1 = -1/2.
///
/// Computed from sum_{k=0}^{m} C(m+1,k) B_k = 0 and cached; concurrent
/// callers serialize on the cache fill.
inline mpq_class bernoulli(unsigned n) {
  auto& cache = detail::bernoulli_cache();
  std::lock_guard lock(cache.mutex);
  auto& b = cache.values;
  while (b.size() <= n) {
    const unsigned m = static_cast<unsigned>(b.size());
    mpq_class acc = 0;
    for (unsigned k = 0; k < m; ++k) {
      if (k > 1 && (k % 2) == 1) continue;  // odd B_k vanish for k >= 3
      acc += mpq_class(binomial(m + 1, k)) * b[k];
    }
    mpq_class next = -acc / mpq_class(m + 1);
    next.canonicalize();
    b.push_back(next);
  }
  return b[n];
}

/// zeta(-d) = (-1)^d B_{d+1} / (d+1), exact.
inline mpq_class zeta_nonpos(unsigned d) {
  mpq_class r = bernoulli(d + 1) / mpq_class(d + 1);
  if (d % 2 == 1) r = -r;
  r.canonicalize();
  return r;
}

inline Real factorial_real(unsigned n, const PrecisionContext& ctx) {
  return to_real(factorial(n), ctx);
}

// ---------------------------------------------------------------------------
// Riemann zeta at integers

namespace detail {

struct ZetaWithDerivative {
  Real value;
  Real derivative;
};

// Euler-Maclaurin summation for zeta(s) and zeta'(s), integer s >= 2.
//
// zeta(s) = sum_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2
//         + sum_{j>=1} B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1} + R.
// The correction terms decrease while 2*pi*N exceeds s+2j; the remainder is
// bounded by the first omitted term, so the loop stops once a term falls
// below the target. If the terms stop decreasing first, N is doubled.
inline ZetaWithDerivative euler_maclaurin_zeta(unsigned s, const PrecisionContext& ctx) {
  if (s < 2) throw std::domain_error("Euler-Maclaurin zeta requires s >= 2");
  const PrecisionContext work = ctx.widened(15);
  auto scope = work.activate();
  const Real target = boost::multiprecision::pow(Real(10), -static_cast<int>(ctx.digits() + 8));
  const Real sr = Real(s);

  std::uint64_t n_cut = ctx.digits() / 2 + s + 4;
  for (;;) {
    Real value = 0;
    Real deriv = 0;
    for (std::uint64_t n = 1; n < n_cut; ++n) {
      const Real nr = Real(n);
      const Real term = boost::multiprecision::pow(nr, -sr);
      value += term;
      deriv -= boost::multiprecision::log(nr) * term;
    }
    const Real nr = Real(n_cut);
    const Real log_n = boost::multiprecision::log(nr);
    const Real n_pow = boost::multiprecision::pow(nr, 1 - sr);  // N^{1-s}
    value += n_pow / (sr - 1) + n_pow / nr / 2;
    deriv += -log_n * n_pow / (sr - 1) - n_pow / ((sr - 1) * (sr - 1)) - log_n * n_pow / nr / 2;

    // poly = s(s+1)...(s+2j-2), dpoly its derivative in s.
    Real poly = sr;
    Real dpoly = 1;
    Real n_power = n_pow / nr;  // N^{-s}
    Real previous = -1;
    bool converged = false;
    for (unsigned j = 1;; ++j) {
      if (j > 1) {
        const Real a = sr + Real(2 * j - 3);
        const Real b = sr + Real(2 * j - 2);
        dpoly = dpoly * a * b + poly * (a + b);
        poly = poly * a * b;
      }
      n_power /= j == 1 ? nr : nr * nr;  // N^{-s-2j+1}
      const Real coeff = to_real(bernoulli(2 * j) / mpq_class(factorial(2 * j)));
      const Real term = coeff * poly * n_power;
      const Real dterm = coeff * n_power * (dpoly - log_n * poly);
      const Real size = boost::multiprecision::abs(term) + boost::multiprecision::abs(dterm);
      if (previous >= 0 && size > previous) break;  // asymptotic series turned
      value += term;
      deriv += dterm;
      previous = size;
      if (size < target) {
        converged = true;
        break;
      }
    }
    if (converged) return {rounded(value, ctx), rounded(deriv, ctx)};
    n_cut *= 2;
  }
}

}  // namespace detail

/// zeta(m) for integer m >= 2. Even m use the Bernoulli closed form,
/// odd m use Euler-Maclaurin summation.
inline Real zeta_int(unsigned m, const PrecisionContext& ctx) {
  if (m < 2) throw std::domain_error("zeta_int requires m >= 2 (use zeta_nonpos for m <= 0)");
  if (m % 2 == 0) {
    // zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!)
    const PrecisionContext work = ctx.widened(10);
    auto scope = work.activate();
    const unsigned k = m / 2;
    mpq_class coeff = bernoulli(m) / mpq_class(2 * factorial(m));
    if (k % 2 == 0) coeff = -coeff;
    const Real two_pi = 2 * pi(work);
    const Real r = to_real(coeff) * boost::multiprecision::pow(two_pi, static_cast<int>(m));
    return rounded(r, ctx);
  }
  return detail::euler_maclaurin_zeta(m, ctx).value;
}

/// zeta'(m) for integer m >= 2 via term-wise differentiated Euler-Maclaurin.
inline Real zeta_prime_int(unsigned m, const PrecisionContext& ctx) {
  return detail::euler_maclaurin_zeta(m, ctx).derivative;
}

inline constexpr unsigned kMaxZetaPrimeNegArgument = 6;

/// zeta'(-d) for 0 <= d <= 6.
///
/// d = 0:      -log(2 pi)/2.
/// even d=2k:  (-1)^k (2k)! zeta(2k+1) / (2 (2 pi)^{2k}).
/// odd d:      chi(-d) [(log(2 pi) - psi(1+d)) zeta(1+d) - zeta'(1+d)], from
///             differentiating zeta(s) = chi(s) zeta(1-s) where
///             chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s); the cotangent
///             term vanishes at odd negative integers.
inline Real zeta_prime_neg(unsigned d, const PrecisionContext& ctx) {
  if (d > kMaxZetaPrimeNegArgument) {
    throw std::domain_error("zeta_prime_neg supports 0 <= d <= " +
                            std::to_string(kMaxZetaPrimeNegArgument));
  }
  const PrecisionContext work = ctx.widened(10);
  auto scope = work.activate();
  const Real two_pi = 2 * pi(work);
  Real r;
  if (d == 0) {
    r = -boost::multiprecision::log(two_pi) / 2;
  } else if (d % 2 == 0) {
    const unsigned k = d / 2;
    r = to_real(factorial(d)) * zeta_int(d + 1, work) /
        (2 * boost::multiprecision::pow(two_pi, static_cast<int>(d)));
    if (k % 2 == 1) r = -r;
  } else {
    // sin(-pi d / 2) = -(-1)^{(d-1)/2}
    const int sin_sign = ((d - 1) / 2) % 2 == 0 ? -1 : 1;
    const Real chi = sin_sign * to_real(factorial(d)) /
                     (boost::multiprecision::pow(Real(2), static_cast<int>(d)) *
                      boost::multiprecision::pow(pi(work), static_cast<int>(d + 1)));
    mpq_class harmonic = 0;
    for (unsigned i = 1; i <= d; ++i) harmonic += mpq_class(1, i);
    const Real psi = to_real(harmonic) - euler_gamma(work);
    r = chi * ((boost::multiprecision::log(two_pi) - psi) * zeta_int(d + 1, work) -
               zeta_prime_int(d + 1, work));
  }
  return rounded(r, ctx);
}

}  // namespace ntuple

#endif  // NTUPLE_PRECISION_HPP

#ifndef NTUPLE_FORMAL_SERIES_HPP
#define NTUPLE_FORMAL_SERIES_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ntuple/precision.hpp"

namespace ntuple {

template <class T>
class Series;

// Unit helpers dispatch on the coefficient type.
inline Real unit_inverse(const Real& x);
inline Real unit_one_like(const Real&);
template <class T>
Series<T> unit_inverse(const Series<T>& x);
template <class T>
Series<T> unit_one_like(const Series<T>& x);

/// Truncated power series c_0 + c_1 t + ... + c_{order-1} t^{order-1}.
///
/// Coefficients may themselves be series (polynomials in a second variable
/// truncated at their own order). A default-constructed series has order 0
/// and acts as an exact zero in every operation, which lets `T{}` serve as
/// the zero coefficient for nested series.
template <class T>
class Series {
 public:
  Series() = default;
  explicit Series(std::size_t order) : c_(order, T{}) {}
  explicit Series(std::vector<T> coeffs) : c_(std::move(coeffs)) {}

  /// Constant series `value` with the given order.
  static Series constant(const T& value, std::size_t order) {
    Series s(order);
    if (order > 0) s.c_[0] = value;
    return s;
  }

  std::size_t order() const noexcept { return c_.size(); }
  const std::vector<T>& coefficients() const noexcept { return c_; }

  /// Coefficient of t^k; zero beyond the truncation order.
  T operator[](std::size_t k) const { return k < c_.size() ? c_[k] : T{}; }
  T& at(std::size_t k) { return c_.at(k); }

  Series truncated(std::size_t order) const {
    Series r(order);
    for (std::size_t k = 0; k < std::min(order, c_.size()); ++k) r.c_[k] = c_[k];
    return r;
  }

  Series& operator+=(const Series& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T{});
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] + o.c_[k];
    return *this;
  }
  Series& operator-=(const Series& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), T{});
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] = c_[k] - o.c_[k];
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator-(const Series& a) {
    Series r(a.order());
    for (std::size_t k = 0; k < a.order(); ++k) r.c_[k] = -a.c_[k];
    return r;
  }

  friend Series operator*(const Series& a, const Series& b) {
    const std::size_t order = std::max(a.order(), b.order());
    Series r(order);
    for (std::size_t i = 0; i < a.order(); ++i) {
      for (std::size_t j = 0; j < b.order() && i + j < order; ++j) {
        r.c_[i + j] = r.c_[i + j] + a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

  /// Scalar multiple by a Real (applied coefficient-wise, recursively).
  friend Series operator*(const Series& a, const Real& s) {
    Series r(a.order());
    for (std::size_t k = 0; k < a.order(); ++k) r.c_[k] = a.c_[k] * s;
    return r;
  }
  friend Series operator*(const Real& s, const Series& a) { return a * s; }

  /// Multiplicative inverse; the constant term must be a unit.
  Series inverse() const {
    if (c_.empty()) throw std::domain_error("Series::inverse of an empty series");
    const T inv0 = unit_inverse(c_[0]);
    Series r(order());
    r.c_[0] = inv0;
    for (std::size_t n = 1; n < order(); ++n) {
      T acc{};
      for (std::size_t k = 1; k <= n; ++k) acc = acc + c_[k] * r.c_[n - k];
      r.c_[n] = -(acc * inv0);
    }
    return r;
  }

  /// Formal derivative d/dt, keeping the truncation order.
  Series derivative() const {
    Series r(order());
    for (std::size_t k = 1; k < order(); ++k) r.c_[k - 1] = c_[k] * Real(static_cast<unsigned long>(k));
    return r;
  }

  /// Non-negative integer power.
  Series pow(unsigned e) const {
    Series result = Series::constant(unit_one(), order());
    Series base = *this;
    while (e > 0) {
      if (e & 1u) result = result * base;
      base = base * base;
      e >>= 1u;
    }
    return result;
  }

  /// Composition this(inner), requiring inner to have zero constant term.
  /// Evaluated by Horner's rule at the given order.
  Series compose(const Series& inner, std::size_t order) const {
    Series result(order);
    for (std::size_t k = c_.size(); k-- > 0;) {
      result = (result * inner).truncated(order);
      result.c_[0] = result.c_[0] + c_[k];
    }
    return result;
  }

  /// Real power t -> this^p for a unit constant term that is a positive Real.
  /// Only meaningful for scalar coefficients.
  Series real_pow(const Real& p) const;

 private:
  T unit_one() const {
    if (!c_.empty()) return unit_one_like(c_[0]);
    return T{};
  }

  std::vector<T> c_;
};

inline Real unit_inverse(const Real& x) {
  if (x == 0) throw std::domain_error("division by zero coefficient");
  return Real(1) / x;
}
inline Real unit_one_like(const Real&) { return Real(1); }

template <class T>
Series<T> unit_inverse(const Series<T>& x) {
  return x.inverse();
}
template <class T>
Series<T> unit_one_like(const Series<T>& x) {
  Series<T> one(x.order());
  if (x.order() > 0) one.at(0) = unit_one_like(x[0]);
  return one;
}

template <>
inline Series<Real> Series<Real>::real_pow(const Real& p) const {
  // (c0 (1 + t))^p with y' = p y u'/u, solved coefficient-wise:
  // n u_0 y_n = sum_{k=1}^{n} (p k - (n - k)) u_k y_{n-k}.
  if (c_.empty()) return *this;
  if (!(c_[0] > 0)) throw std::domain_error("real_pow requires a positive constant term");
  Series r(order());
  r.c_[0] = boost::multiprecision::pow(c_[0], p);
  for (std::size_t n = 1; n < order(); ++n) {
    Real acc = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      acc += (p * Real(static_cast<unsigned long>(k)) - Real(static_cast<unsigned long>(n - k))) *
             c_[k] * r.c_[n - k];
    }
    r.c_[n] = acc / (Real(static_cast<unsigned long>(n)) * c_[0]);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Lagrange inversion

enum class InversionMethod {
  kExplicit,  // multi-index coefficient formula
  kNewton,    // Newton iteration on truncated composition
};

inline constexpr std::size_t kExplicitInversionMaxOrder = 8;

/// Calls visit(multiplicities) for every multiplicity vector m_1..m_w with
/// sum_i i * m_i == weight (i.e. every partition of `weight`), optionally
/// bounded by a maximum number of parts.
inline void for_each_partition(unsigned weight, unsigned max_parts,
                               const std::function<void(const std::vector<unsigned>&)>& visit) {
  std::vector<unsigned> mult(weight + 1, 0);  // mult[i] = multiplicity of part i
  auto recurse = [&](auto&& self, unsigned part, unsigned remaining, unsigned parts) -> void {
    if (remaining == 0) {
      visit(mult);
      return;
    }
    if (part == 0) return;
    for (unsigned m = 0; m * part <= remaining && parts + m <= max_parts; ++m) {
      mult[part] = m;
      self(self, part - 1, remaining - m * part, parts + m);
    }
    mult[part] = 0;
  };
  recurse(recurse, weight, weight, 0);
}

namespace detail {

template <class T>
Series<T> invert_explicit(const Series<T>& a, std::size_t k_max) {
  if (k_max > kExplicitInversionMaxOrder) {
    throw std::invalid_argument("explicit Lagrange inversion limited to order 8");
  }
  const T a1 = a[1];
  const T a1_inv = unit_inverse(a1);
  std::vector<T> ratio(k_max + 2);  // ratio[i] = a_{i+1} / a_1
  for (std::size_t i = 1; i + 1 <= k_max + 1; ++i) ratio[i] = a[i + 1] * a1_inv;

  Series<T> b(k_max + 1);
  T a1_inv_pow = unit_one_like(a1);
  for (std::size_t k = 1; k <= k_max; ++k) {
    a1_inv_pow = a1_inv_pow * a1_inv;
    T sum{};
    for_each_partition(static_cast<unsigned>(k - 1), static_cast<unsigned>(k - 1),
                       [&](const std::vector<unsigned>& l) {
                         unsigned total = 0;
                         mpz_class denominator = 1;
                         for (unsigned i = 1; i < l.size(); ++i) {
                           total += l[i];
                           denominator *= factorial(l[i]);
                         }
                         // k (k+1) ... (k-1+total)
                         mpz_class rising = 1;
                         for (unsigned t = 0; t < total; ++t) rising *= static_cast<unsigned long>(k + t);
                         mpq_class coeff(rising, denominator);
                         if (total % 2 == 1) coeff = -coeff;
                         T term = unit_one_like(a1) * to_real(coeff);
                         for (unsigned i = 1; i < l.size(); ++i) {
                           for (unsigned r = 0; r < l[i]; ++r) term = term * ratio[i];
                         }
                         sum = sum + term;
                       });
    b.at(k) = sum * a1_inv_pow * to_real(mpq_class(1, static_cast<unsigned long>(k)));
  }
  return b;
}

template <class T>
Series<T> invert_newton(const Series<T>& a, std::size_t k_max) {
  const std::size_t order = k_max + 1;
  const Series<T> phi = a.truncated(order);
  const Series<T> dphi = phi.derivative();
  Series<T> identity(order);
  identity.at(1) = unit_one_like(a[1]);

  Series<T> b(order);
  b.at(1) = unit_inverse(a[1]);
  // Each step doubles the number of correct coefficients.
  for (std::size_t correct = 2; correct < 2 * order; correct *= 2) {
    const Series<T> residual = phi.compose(b, order) - identity;
    const Series<T> slope = dphi.compose(b, order);
    b = b - (residual * slope.inverse()).truncated(order);
  }
  return b;
}

}  // namespace detail

/// Compositional inverse of phi(t) = a_1 t + a_2 t^2 + ..., returning
/// b_1..b_{k_max} (as a series with zero constant term) such that
/// phi(psi(w)) = w to order k_max. a_1 must be a unit.
template <class T>
Series<T> lagrange_invert(const Series<T>& a, std::size_t k_max,
                          InversionMethod method = InversionMethod::kNewton) {
  if (k_max < 1) throw std::invalid_argument("lagrange_invert requires K >= 1");
  if (a.order() < 2) throw std::domain_error("lagrange_invert: a_1 = 0");
  if constexpr (std::is_same_v<T, Real>) {
    if (a[1] == 0) throw std::domain_error("lagrange_invert: a_1 = 0");
  } else {
    if (a[1].order() == 0 || a[1][0] == 0) throw std::domain_error("lagrange_invert: a_1 is not a unit");
  }
  if (method == InversionMethod::kExplicit) return detail::invert_explicit(a, k_max);
  return detail::invert_newton(a, k_max);
}

}  // namespace ntuple

#endif  // NTUPLE_FORMAL_SERIES_HPP

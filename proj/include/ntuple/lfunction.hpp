#ifndef NTUPLE_LFUNCTION_HPP
#define NTUPLE_LFUNCTION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "ntuple/arith.hpp"
#include "ntuple/precision.hpp"

namespace ntuple {

struct Pole {
  mpq_class position;
  Real residue;  // omega_nu = Res_{s=nu} L_f(s)
};

/// Laurent data of L_f(s) = sum f(n) n^{-s} that drives the asymptotics.
///
/// c1, c2, c3 are the coefficients of the truncated saddle equation
/// -Phi'(z) = c1 z^{-(alpha+1)} + c2 z^{-(beta+1)} + ...: for two poles c3 is
/// L_f(0); for three poles they are C_1, C_2, C_3.
struct LSeriesData {
  ExponentSpec family;
  mpq_class alpha;
  std::vector<Pole> poles;  // descending positions
  mpq_class l_at_zero_exact;
  Real l_at_zero;
  Real l_prime_at_zero;
  std::optional<Real> c1, c2, c3;
  PrecisionContext ctx;
};

/// omega_nu Gamma(nu+1) zeta(nu+1) for an integer pole nu >= 1: the weight of
/// z^{-(nu+1)} in -Phi'(z).
inline Real pole_weight(const Pole& pole, const PrecisionContext& ctx) {
  if (pole.position.get_den() != 1 || pole.position < 1) {
    throw std::domain_error("pole_weight: only integer poles >= 1 are supported");
  }
  const unsigned nu = static_cast<unsigned>(pole.position.get_num().get_ui());
  auto scope = ctx.activate();
  return pole.residue * factorial_real(nu, ctx) * zeta_int(nu + 1, ctx);
}

/// Residue of L*(s) = Gamma(s) zeta(s+1) L(s) at the positive pole nu:
/// (nu-1)! zeta(nu+1) omega_nu.
inline Real lstar_residue(const Pole& pole, const PrecisionContext& ctx) {
  if (pole.position.get_den() != 1 || pole.position < 1) {
    throw std::domain_error("lstar_residue: only integer poles >= 1 are supported");
  }
  const unsigned nu = static_cast<unsigned>(pole.position.get_num().get_ui());
  auto scope = ctx.activate();
  return factorial_real(nu - 1, ctx) * zeta_int(nu + 1, ctx) * pole.residue;
}

/// Residue of L* at s = 0. Gamma(s) zeta(s+1) = s^{-2} + O(1) has no s^{-1}
/// term, so the residue equals L'(0) whether or not L(0) vanishes.
inline Real lstar_residue_at_zero(const LSeriesData& data) { return data.l_prime_at_zero; }

namespace detail {

// zeta at an integer argument other than 1, as exact rational when t <= 0.
struct ZetaFactor {
  bool exact;
  mpq_class rational;
  Real real;
};

inline ZetaFactor zeta_factor(long t, const PrecisionContext& ctx) {
  if (t == 1) throw std::logic_error("zeta_factor: pole at 1");
  if (t <= 0) {
    const mpq_class q = zeta_nonpos(static_cast<unsigned>(-t));
    return {true, q, to_real(q, ctx)};
  }
  return {false, 0, zeta_int(static_cast<unsigned>(t), ctx)};
}

inline bool is_exact_zero(const ZetaFactor& f) { return f.exact && f.rational == 0; }

}  // namespace detail

/// L-data for N_ell: L_{f_ell}(s) = prod_{k=0}^{ell-2} zeta(s-k).
///
/// The factor zeta(s-k) has its pole at s = k+1; the residue there is the
/// product of the remaining factors, which vanishes when one of them hits a
/// trivial zero. L(0) and L'(0) are assembled by the product rule with the
/// zeta(-k) values kept exact, so ell >= 6 gives L'(0) = 0 identically.
inline LSeriesData lf_data_ntuple(unsigned ell, const PrecisionContext& ctx) {
  if (ell < 2) throw std::invalid_argument("lf_data_ntuple requires ell >= 2");
  auto scope = ctx.activate();
  LSeriesData data{ntuple_exponent(ell), 0, {}, 0, Real(0), Real(0), {}, {}, {}, ctx};

  for (unsigned nu = ell - 1; nu >= 1; --nu) {
    Real residue = 1;
    bool vanishes = false;
    for (unsigned k = 0; k + 2 <= ell; ++k) {
      if (k == nu - 1) continue;
      const auto f = detail::zeta_factor(static_cast<long>(nu) - static_cast<long>(k), ctx);
      if (detail::is_exact_zero(f)) {
        vanishes = true;
        break;
      }
      residue *= f.real;
    }
    if (!vanishes) data.poles.push_back({mpq_class(nu), residue});
  }
  data.alpha = data.poles.front().position;

  std::vector<mpq_class> at_zero;  // zeta(-k), k = 0..ell-2
  for (unsigned k = 0; k + 2 <= ell; ++k) at_zero.push_back(zeta_nonpos(k));
  data.l_at_zero_exact = 1;
  unsigned zeros = 0;
  for (const auto& v : at_zero) {
    data.l_at_zero_exact *= v;
    if (v == 0) ++zeros;
  }
  data.l_at_zero = to_real(data.l_at_zero_exact);

  // d/ds prod zeta(s-k) at 0 = sum_j zeta'(-j) prod_{k != j} zeta(-k)
  Real derivative = 0;
  if (zeros <= 1) {
    for (unsigned j = 0; j < at_zero.size(); ++j) {
      mpq_class others = 1;
      for (unsigned k = 0; k < at_zero.size(); ++k) {
        if (k != j) others *= at_zero[k];
      }
      if (others == 0) continue;
      derivative += zeta_prime_neg(j, ctx) * to_real(others);
    }
  }
  data.l_prime_at_zero = derivative;

  if (data.poles.size() == 2) {
    data.c1 = pole_weight(data.poles[0], ctx);
    data.c2 = pole_weight(data.poles[1], ctx);
    data.c3 = data.l_at_zero;
  } else if (data.poles.size() == 3) {
    data.c1 = pole_weight(data.poles[0], ctx);
    data.c2 = pole_weight(data.poles[1], ctx);
    data.c3 = pole_weight(data.poles[2], ctx);
  }
  return data;
}

struct ThreePoleConstants {
  Real c1, c2, c3;
};

/// C_1, C_2, C_3 assembled directly from their zeta-product formulas:
/// C_i = (ell-i)! zeta(ell-i+1) prod_{0<=k<=ell-2, k != ell-i-1} zeta(ell-i-k).
inline ThreePoleConstants c_constants(unsigned ell, const PrecisionContext& ctx) {
  if (ell < 4) throw std::invalid_argument("c_constants requires ell >= 4");
  auto scope = ctx.activate();
  auto assemble = [&](unsigned i) {
    const unsigned nu = ell - i;
    Real value = factorial_real(nu, ctx) * zeta_int(nu + 1, ctx);
    for (unsigned k = 0; k + 2 <= ell; ++k) {
      if (k == nu - 1) continue;
      value *= detail::zeta_factor(static_cast<long>(nu) - static_cast<long>(k), ctx).real;
    }
    return value;
  };
  ThreePoleConstants c{assemble(1), assemble(2), assemble(3)};
  if (!(c.c1 > 0) || c.c2 == 0 || c.c3 == 0) {
    throw std::logic_error("c_constants: expected C1 > 0, C2 != 0, C3 != 0");
  }
  return c;
}

inline constexpr unsigned kMaxPowerFamilyDegree = 4;

/// L-data for f(n) = n^d: L(s) = zeta(s-d), one pole at d+1 with residue 1.
inline LSeriesData lf_data_power(unsigned d, const PrecisionContext& ctx) {
  if (d > kMaxPowerFamilyDegree) {
    throw std::domain_error("lf_data_power supports d <= " +
                            std::to_string(kMaxPowerFamilyDegree));
  }
  auto scope = ctx.activate();
  LSeriesData data{Power{d}, mpq_class(d + 1), {}, zeta_nonpos(d), Real(0), Real(0), {}, {}, {}, ctx};
  data.poles.push_back({mpq_class(d + 1), Real(1)});
  data.l_at_zero = to_real(data.l_at_zero_exact);
  data.l_prime_at_zero = zeta_prime_neg(d, ctx);
  return data;
}

}  // namespace ntuple

#endif  // NTUPLE_LFUNCTION_HPP

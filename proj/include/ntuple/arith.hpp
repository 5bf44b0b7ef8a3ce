#ifndef NTUPLE_ARITH_HPP
#define NTUPLE_ARITH_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <gmpxx.h>

namespace ntuple {

/// Dense arithmetic-function table over 1..N. Index 0 is unused and holds 0,
/// so `table[n]` is f(n) and `table.size() == N + 1`.
using IntTable = std::vector<mpz_class>;

inline std::size_t table_length(const IntTable& t) { return t.empty() ? 0 : t.size() - 1; }

// ---------------------------------------------------------------------------
// Exponent functions f(n) defining prod_n (1 - q^n)^{-f(n)}

/// f = g_rank, the number of index-n subgroups of Z^rank. Rank 0 is the
/// Dirichlet identity (f(1) = 1, f(n) = 0 otherwise), which yields N_1.
struct SubgroupCount {
  unsigned rank = 1;
};

/// f(n) = n^d.
struct Power {
  unsigned d = 0;
};

/// f(n) = 1 iff n is a k-gonal number m((k-2)m - (k-4))/2 with m >= 1.
struct PolygonalIndicator {
  unsigned k = 3;
};

/// Explicit non-negative values; values[0] is f(1).
struct Table {
  std::vector<mpz_class> values;
};

using ExponentSpec = std::variant<SubgroupCount, Power, PolygonalIndicator, Table>;

/// Exponent for the commuting ell-tuple counts N_ell(n): f = g_{ell-1}.
inline ExponentSpec ntuple_exponent(unsigned ell) {
  if (ell < 1) throw std::invalid_argument("ntuple family requires ell >= 1");
  return SubgroupCount{ell - 1};
}

inline std::string describe(const ExponentSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SubgroupCount>) {
          return "ntuple(ell=" + std::to_string(s.rank + 1) + ")";
        } else if constexpr (std::is_same_v<S, Power>) {
          return "power(d=" + std::to_string(s.d) + ")";
        } else if constexpr (std::is_same_v<S, PolygonalIndicator>) {
          return "polygonal(k=" + std::to_string(s.k) + ")";
        } else {
          return "table(len=" + std::to_string(s.values.size()) + ")";
        }
      },
      spec);
}

inline void validate(const ExponentSpec& spec) {
  if (const auto* p = std::get_if<PolygonalIndicator>(&spec); p && p->k < 3) {
    throw std::invalid_argument("polygonal family requires k >= 3");
  }
  if (const auto* t = std::get_if<Table>(&spec)) {
    for (const auto& v : t->values) {
      if (v < 0) throw std::invalid_argument("exponent table values must be non-negative");
    }
  }
}

// ---------------------------------------------------------------------------
// Divisor sums and Dirichlet convolution

/// sigma_m(n) = sum_{d | n} d^m.
inline mpz_class divisor_power_sum(unsigned m, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisor_power_sum requires n >= 1");
  mpz_class sum = 0;
  mpz_class term;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    mpz_ui_pow_ui(term.get_mpz_t(), d, m);
    sum += term;
    const std::uint64_t e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(term.get_mpz_t(), e, m);
      sum += term;
    }
  }
  return sum;
}

/// n -> n^k on 1..N.
inline IntTable power_table(unsigned k, std::size_t n_max) {
  IntTable t(n_max + 1, 0);
  for (std::size_t n = 1; n <= n_max; ++n) mpz_ui_pow_ui(t[n].get_mpz_t(), n, k);
  return t;
}

/// (a * b)(n) = sum_{d | n} a(d) b(n/d), sieve order O(N log N).
inline IntTable dirichlet_convolve(const IntTable& a, const IntTable& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dirichlet_convolve: table lengths differ (" +
                                std::to_string(table_length(a)) + " vs " +
                                std::to_string(table_length(b)) + ")");
  }
  const std::size_t n_max = table_length(a);
  IntTable r(a.size(), 0);
  for (std::size_t d = 1; d <= n_max; ++d) {
    if (a[d] == 0) continue;
    for (std::size_t e = 1; d * e <= n_max; ++e) {
      if (b[e] == 0) continue;
      mpz_addmul(r[d * e].get_mpz_t(), a[d].get_mpz_t(), b[e].get_mpz_t());
    }
  }
  return r;
}

/// g_ell(1..N) = Id^0 * Id^1 * ... * Id^{ell-1}; ell = 0 gives the identity.
inline IntTable subgroup_count_table(unsigned ell, std::size_t n_max) {
  IntTable g(n_max + 1, 0);
  if (n_max >= 1) g[1] = 1;
  for (unsigned k = 0; k < ell; ++k) {
    // Convolution with Id^k without materializing the power table twice.
    IntTable next(n_max + 1, 0);
    mpz_class power;
    for (std::size_t d = 1; d <= n_max; ++d) {
      if (g[d] == 0) continue;
      for (std::size_t e = 1; d * e <= n_max; ++e) {
        mpz_ui_pow_ui(power.get_mpz_t(), e, k);
        mpz_addmul(next[d * e].get_mpz_t(), g[d].get_mpz_t(), power.get_mpz_t());
      }
    }
    g = std::move(next);
  }
  return g;
}

inline constexpr unsigned kHnfMaxRank = 4;
inline constexpr unsigned kHnfMaxIndex = 64;

/// Counts index-n sublattices of Z^ell by enumerating Hermite normal forms:
/// upper-triangular integer matrices with positive diagonal d_1..d_ell,
/// prod d_i = n, and each above-diagonal entry of column j in 0..d_j - 1.
inline std::uint64_t hnf_subgroup_count(unsigned ell, unsigned n) {
  if (ell < 1 || ell > kHnfMaxRank || n < 1 || n > kHnfMaxIndex) {
    throw std::out_of_range("hnf_subgroup_count: requires 1 <= ell <= 4 and 1 <= n <= 64");
  }
  std::vector<unsigned> diag(ell, 1);
  std::uint64_t count = 0;

  // Enumerate every matrix for a fixed diagonal with an odometer over the
  // above-diagonal entries.
  auto count_matrices = [&]() {
    std::vector<unsigned> bound;  // one slot per above-diagonal entry
    for (unsigned col = 1; col < ell; ++col) {
      for (unsigned row = 0; row < col; ++row) bound.push_back(diag[col]);
    }
    std::vector<unsigned> entry(bound.size(), 0);
    for (;;) {
      ++count;
      std::size_t i = 0;
      while (i < entry.size() && ++entry[i] == bound[i]) entry[i++] = 0;
      if (i == entry.size()) break;
    }
  };

  auto place = [&](auto&& self, unsigned pos, unsigned remaining) -> void {
    if (pos + 1 == ell) {
      diag[pos] = remaining;
      count_matrices();
      return;
    }
    for (unsigned d = 1; d <= remaining; ++d) {
      if (remaining % d != 0) continue;
      diag[pos] = d;
      self(self, pos + 1, remaining / d);
    }
  };
  place(place, 0, n);
  return count;
}

// ---------------------------------------------------------------------------
// Polygonal numbers and exponent materialization

/// True iff n = m((k-2)m - (k-4))/2 for some integer m >= 1. Solves the
/// quadratic (k-2)m^2 - (k-4)m - 2n = 0 with an exact square-root test.
inline bool is_polygonal(unsigned k, std::uint64_t n) {
  if (k < 3) throw std::invalid_argument("polygonal numbers require k >= 3");
  if (n == 0) return false;
  const mpz_class a = k - 2;
  const mpz_class b = mpz_class(static_cast<long>(k)) - 4;  // m-coefficient is -(k-4)
  const mpz_class disc = b * b + 8 * a * mpz_class(static_cast<unsigned long>(n));
  if (mpz_perfect_square_p(disc.get_mpz_t()) == 0) return false;
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  const mpz_class numerator = b + root;
  const mpz_class denominator = 2 * a;
  return numerator > 0 && mpz_divisible_p(numerator.get_mpz_t(), denominator.get_mpz_t()) != 0;
}

/// Materializes f(1..N) for the given exponent spec.
inline IntTable evaluate_exponent(const ExponentSpec& spec, std::size_t n_max) {
  validate(spec);
  return std::visit(
      [n_max](const auto& s) -> IntTable {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SubgroupCount>) {
          return subgroup_count_table(s.rank, n_max);
        } else if constexpr (std::is_same_v<S, Power>) {
          return power_table(s.d, n_max);
        } else if constexpr (std::is_same_v<S, PolygonalIndicator>) {
          IntTable t(n_max + 1, 0);
          for (std::size_t n = 1; n <= n_max; ++n) t[n] = is_polygonal(s.k, n) ? 1 : 0;
          return t;
        } else {
          if (s.values.size() < n_max) {
            throw std::invalid_argument("exponent table has " + std::to_string(s.values.size()) +
                                        " values, " + std::to_string(n_max) + " required");
          }
          IntTable t(n_max + 1, 0);
          for (std::size_t n = 1; n <= n_max; ++n) t[n] = s.values[n - 1];
          return t;
        }
      },
      spec);
}

/// Exponent D with f(m) <= m^D for every m >= 1, or -1 when f has finite
/// support (explicit tables). Used for certified tail bounds.
///
/// g_r(m) counts HNFs: at most d_r(m) diagonals times m^{r-1} fillings, and
/// d_r(m) <= m^{r-1}, so D = 2r - 2 suffices.
inline int exponent_majorant_degree(const ExponentSpec& spec) {
  return std::visit(
      [](const auto& s) -> int {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, SubgroupCount>) {
          return s.rank == 0 ? 0 : static_cast<int>(2 * s.rank - 2);
        } else if constexpr (std::is_same_v<S, Power>) {
          return static_cast<int>(s.d);
        } else if constexpr (std::is_same_v<S, PolygonalIndicator>) {
          return 0;
        } else {
          return -1;
        }
      },
      spec);
}

}  // namespace ntuple

#endif  // NTUPLE_ARITH_HPP

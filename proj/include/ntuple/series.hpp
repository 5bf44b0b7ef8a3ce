#ifndef NTUPLE_SERIES_HPP
#define NTUPLE_SERIES_HPP

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <gmpxx.h>

#include "ntuple/arith.hpp"

namespace ntuple {

/// Exact integer sequence c(0..N).
struct BigIntSeq {
  std::size_t offset = 0;
  std::vector<mpz_class> values;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t max_index() const noexcept { return values.empty() ? 0 : values.size() - 1; }
  const mpz_class& operator[](std::size_t n) const { return values.at(n - offset); }

  friend bool operator==(const BigIntSeq&, const BigIntSeq&) = default;
};

/// Raised when n does not divide the recurrence sum, i.e. the product does
/// not have integer coefficients (or the computation is wrong).
class IntegralityError : public std::runtime_error {
 public:
  IntegralityError(std::size_t n, const std::string& what)
      : std::runtime_error(what), index_(n) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// c(k) = sum_{d | k} d f(d). Bridges prod (1-q^n)^{-f(n)} and
/// exp(sum c(k) q^k / k).
inline IntTable weighted_divisor_table(const IntTable& f) {
  const std::size_t n_max = table_length(f);
  IntTable c(n_max + 1, 0);
  for (std::size_t d = 1; d <= n_max; ++d) {
    if (f[d] == 0) continue;
    const mpz_class weighted = f[d] * static_cast<unsigned long>(d);
    for (std::size_t k = d; k <= n_max; k += d) c[k] += weighted;
  }
  return c;
}

namespace detail {

/// c(k) split into word-sized values (fast path) and the rare large ones.
struct WeightTable {
  const IntTable& c;
  std::vector<unsigned long> small;
  std::vector<unsigned char> is_small;

  explicit WeightTable(const IntTable& table)
      : c(table), small(table.size(), 0), is_small(table.size(), 0) {
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (table[k] >= 0 && mpz_fits_ulong_p(table[k].get_mpz_t()) != 0) {
        small[k] = table[k].get_ui();
        is_small[k] = 1;
      }
    }
  }
};

inline void accumulate_range(const WeightTable& w, const std::vector<mpz_class>& p, std::size_t n,
                             std::size_t k_begin, std::size_t k_end, mpz_class& out) {
  out = 0;
  for (std::size_t k = k_begin; k < k_end; ++k) {
    if (w.is_small[k] != 0) {
      if (w.small[k] != 0) mpz_addmul_ui(out.get_mpz_t(), p[n - k].get_mpz_t(), w.small[k]);
    } else {
      mpz_addmul(out.get_mpz_t(), w.c[k].get_mpz_t(), p[n - k].get_mpz_t());
    }
  }
}

}  // namespace detail

/// Coefficients p_f(0..N) of prod_{n>=1} (1 - q^n)^{-f(n)} from
/// n p_f(n) = sum_{k=1}^{n} c(k) p_f(n-k), p_f(0) = 1.
///
/// Each division by n is checked; a nonzero remainder raises
/// IntegralityError. With threads > 1 the inner sum is split into
/// contiguous chunks that are added back in order (exact, so the result
/// does not depend on the split).
inline BigIntSeq expand_product(const ExponentSpec& spec, std::size_t n_max, unsigned threads = 1) {
  const IntTable f = evaluate_exponent(spec, n_max);
  const IntTable c = weighted_divisor_table(f);
  const detail::WeightTable weights(c);
  BigIntSeq seq;
  seq.values.assign(n_max + 1, 0);
  auto& p = seq.values;
  p[0] = 1;
  constexpr std::size_t kParallelCutoff = 1024;
  threads = std::max(1u, threads);
  std::vector<mpz_class> partial(threads);
  mpz_class sum;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (threads == 1 || n < kParallelCutoff) {
      detail::accumulate_range(weights, p, n, 1, n + 1, sum);
    } else {
      const std::size_t chunk = (n + threads - 1) / threads;
      std::vector<std::jthread> workers;
      workers.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = 1 + t * chunk;
        const std::size_t hi = std::min(n + 1, lo + chunk);
        if (lo >= hi) {
          partial[t] = 0;
          continue;
        }
        workers.emplace_back(
            [&, lo, hi, t] { detail::accumulate_range(weights, p, n, lo, hi, partial[t]); });
      }
      workers.clear();  // join
      sum = 0;
      for (const auto& s : partial) sum += s;
    }
    if (mpz_divisible_ui_p(sum.get_mpz_t(), n) == 0) {
      throw IntegralityError(n, "expand_product: recurrence sum not divisible by n = " +
                                    std::to_string(n) + " for " + describe(spec));
    }
    mpz_divexact_ui(p[n].get_mpz_t(), sum.get_mpz_t(), n);
  }
  return seq;
}

inline constexpr std::size_t kDirectExpansionMax = 500;

/// Independent route: multiplies out each factor (1 - q^m)^{-f(m)} as the
/// truncated binomial series sum_j C(f+j-1, j) q^{mj}.
inline BigIntSeq expand_product_direct(const ExponentSpec& spec, std::size_t n_max) {
  if (n_max > kDirectExpansionMax) {
    throw std::out_of_range("expand_product_direct supports N <= " +
                            std::to_string(kDirectExpansionMax));
  }
  const IntTable f = evaluate_exponent(spec, n_max);
  std::vector<mpz_class> p(n_max + 1, 0);
  p[0] = 1;
  std::vector<mpz_class> binom;
  for (std::size_t m = 1; m <= n_max; ++m) {
    if (f[m] == 0) continue;
    const std::size_t terms = n_max / m;
    binom.assign(terms + 1, 0);
    binom[0] = 1;
    for (std::size_t j = 1; j <= terms; ++j) {
      binom[j] = binom[j - 1] * (f[m] + static_cast<unsigned long>(j - 1));
      mpz_divexact_ui(binom[j].get_mpz_t(), binom[j].get_mpz_t(), j);
    }
    std::vector<mpz_class> next(n_max + 1, 0);
    for (std::size_t n = 0; n <= n_max; ++n) {
      if (p[n] == 0) continue;
      for (std::size_t j = 0; n + j * m <= n_max; ++j) {
        mpz_addmul(next[n + j * m].get_mpz_t(), p[n].get_mpz_t(), binom[j].get_mpz_t());
      }
    }
    p = std::move(next);
  }
  return BigIntSeq{0, std::move(p)};
}

/// p(0..N) via Euler's pentagonal number recurrence.
inline BigIntSeq pentagonal_p(std::size_t n_max) {
  std::vector<mpz_class> p(n_max + 1, 0);
  p[0] = 1;
  for (std::size_t n = 1; n <= n_max; ++n) {
    mpz_class acc = 0;
    for (std::size_t j = 1;; ++j) {
      const std::size_t g1 = j * (3 * j - 1) / 2;
      if (g1 > n) break;
      const std::size_t g2 = j * (3 * j + 1) / 2;
      mpz_class term = p[n - g1];
      if (g2 <= n) term += p[n - g2];
      if (j % 2 == 1) {
        acc += term;
      } else {
        acc -= term;
      }
    }
    p[n] = acc;
  }
  return BigIntSeq{0, std::move(p)};
}

/// |C_{ell,n}| = n! N_ell(n), given the N_ell table.
inline mpz_class commuting_tuple_count(const BigIntSeq& n_ell, std::size_t n) {
  if (n > n_ell.max_index()) throw std::out_of_range("commuting_tuple_count: n beyond table");
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), n);
  return fact * n_ell[n];
}

inline mpz_class commuting_tuple_count(unsigned ell, std::size_t n) {
  return commuting_tuple_count(expand_product(ntuple_exponent(ell), n), n);
}

// ---------------------------------------------------------------------------
// Brute-force group oracle

namespace detail {

using Perm = std::array<std::uint8_t, 5>;

inline std::vector<Perm> all_permutations(unsigned n) {
  Perm p{};
  std::iota(p.begin(), p.begin() + n, std::uint8_t{0});
  std::vector<Perm> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.begin() + n));
  return out;
}

inline bool commute(const Perm& a, const Perm& b, unsigned n) {
  for (unsigned i = 0; i < n; ++i) {
    if (a[b[i]] != b[a[i]]) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr unsigned kBruteForceMaxEll = 3;
inline constexpr unsigned kBruteForceMaxN = 5;

/// Counts ell-tuples in S_n^ell with pairwise commuting components.
///
/// For (ell, n) = (3, 5) the first component is fixed and the remaining
/// ones are drawn from its centralizer, recursively; smaller cases
/// enumerate S_n^ell directly.
inline mpz_class brute_force_commuting(unsigned ell, unsigned n) {
  if (ell < 1 || ell > kBruteForceMaxEll || n > kBruteForceMaxN) {
    throw std::out_of_range("brute_force_commuting: requires 1 <= ell <= 3 and 0 <= n <= 5");
  }
  const auto perms = detail::all_permutations(n);
  const std::size_t size = perms.size();
  std::vector<std::vector<bool>> commutes(size, std::vector<bool>(size));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i; j < size; ++j) {
      commutes[i][j] = commutes[j][i] = detail::commute(perms[i], perms[j], n);
    }
  }

  std::uint64_t count = 0;
  if (ell == 3 && n == 5) {
    std::vector<std::size_t> centralizer;
    for (std::size_t a = 0; a < size; ++a) {
      centralizer.clear();
      for (std::size_t b = 0; b < size; ++b) {
        if (commutes[a][b]) centralizer.push_back(b);
      }
      for (std::size_t b : centralizer) {
        for (std::size_t c : centralizer) {
          if (commutes[b][c]) ++count;
        }
      }
    }
    return mpz_class(static_cast<unsigned long>(count));
  }

  std::vector<std::size_t> tuple(ell, 0);
  for (;;) {
    bool ok = true;
    for (unsigned i = 0; i < ell && ok; ++i) {
      for (unsigned j = i + 1; j < ell && ok; ++j) ok = commutes[tuple[i]][tuple[j]];
    }
    if (ok) ++count;
    unsigned i = 0;
    while (i < ell && ++tuple[i] == size) tuple[i++] = 0;
    if (i == ell) break;
  }
  return mpz_class(static_cast<unsigned long>(count));
}

}  // namespace ntuple

#endif  // NTUPLE_SERIES_HPP

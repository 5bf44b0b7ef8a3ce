#ifndef NTUPLE_INEQUALITIES_HPP
#define NTUPLE_INEQUALITIES_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "ntuple/series.hpp"

namespace ntuple {

/// Result of an exact inequality scan. Index is std::size_t for the
/// single-index properties and std::pair for Bessenrodt-Ono pairs.
template <class Index>
struct ScanReport {
  std::string family;
  std::string property;
  std::size_t range_lo = 0;
  std::size_t range_hi = 0;
  std::vector<Index> violations;  // ascending
  std::vector<Index> equalities;  // ascending
  // Smallest n0 in the window with no violation in [n0, range_hi]; relative
  // to the scanned window only.
  std::size_t minimal_threshold = 0;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

namespace detail {

inline void require_positive(const BigIntSeq& seq, std::size_t lo, std::size_t hi) {
  if (hi > seq.max_index()) throw std::out_of_range("scan range exceeds the sequence table");
  for (std::size_t n = lo; n <= hi; ++n) {
    if (seq[n] <= 0) {
      throw std::domain_error("scan requires positive values; c(" + std::to_string(n) + ") <= 0");
    }
  }
}

/// Splits [lo, hi] into contiguous chunks, runs scan(chunk_lo, chunk_hi, out)
/// per chunk and concatenates the outputs in chunk order.
template <class Index, class Scan>
void chunked_scan(std::size_t lo, std::size_t hi, unsigned threads, Scan scan,
                  std::vector<Index>& violations, std::vector<Index>& equalities) {
  threads = std::max(1u, threads);
  if (hi < lo) return;
  const std::size_t count = hi - lo + 1;
  const std::size_t chunk = (count + threads - 1) / threads;
  std::vector<std::vector<Index>> v(threads), e(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t a = lo + t * chunk;
      if (a > hi) break;
      const std::size_t b = std::min(hi, a + chunk - 1);
      if (threads == 1) {
        scan(a, b, v[t], e[t]);
      } else {
        workers.emplace_back([&, a, b, t] { scan(a, b, v[t], e[t]); });
      }
    }
  }
  for (unsigned t = 0; t < threads; ++t) {
    violations.insert(violations.end(), v[t].begin(), v[t].end());
    equalities.insert(equalities.end(), e[t].begin(), e[t].end());
  }
}

inline std::size_t threshold_after(const std::vector<std::size_t>& violations, std::size_t lo) {
  return violations.empty() ? lo : violations.back() + 1;
}

// sign of c(n)^2 - c(n+1) c(n-1)
inline int second_difference_sign(const BigIntSeq& seq, std::size_t n, mpz_class& lhs,
                                  mpz_class& rhs) {
  lhs = seq[n] * seq[n];
  rhs = seq[n + 1] * seq[n - 1];
  return cmp(lhs, rhs);
}

inline ScanReport<std::size_t> curvature_scan(const BigIntSeq& seq, std::size_t n_min,
                                              std::size_t n_max, int violation_sign,
                                              std::string property, unsigned threads) {
  if (n_min < 1) throw std::invalid_argument("scan requires n_min >= 1");
  if (n_max < n_min) throw std::invalid_argument("scan requires n_min <= n_max");
  require_positive(seq, n_min - 1, n_max + 1);
  ScanReport<std::size_t> report;
  report.property = std::move(property);
  report.range_lo = n_min;
  report.range_hi = n_max;
  chunked_scan<std::size_t>(
      n_min, n_max, threads,
      [&](std::size_t a, std::size_t b, std::vector<std::size_t>& v, std::vector<std::size_t>& e) {
        mpz_class lhs, rhs;
        for (std::size_t n = a; n <= b; ++n) {
          const int s = second_difference_sign(seq, n, lhs, rhs);
          if (s == 0) {
            e.push_back(n);
          } else if ((s > 0 ? 1 : -1) == violation_sign) {
            v.push_back(n);
          }
        }
      },
      report.violations, report.equalities);
  report.minimal_threshold = threshold_after(report.violations, n_min);
  return report;
}

}  // namespace detail

/// Violation at n iff c(n)^2 < c(n+1) c(n-1); equality recorded separately.
inline ScanReport<std::size_t> log_concavity_scan(const BigIntSeq& seq, std::size_t n_min,
                                                  std::size_t n_max, unsigned threads = 1) {
  return detail::curvature_scan(seq, n_min, n_max, -1, "log-concavity", threads);
}

/// Violation at n iff c(n)^2 > c(n+1) c(n-1).
inline ScanReport<std::size_t> log_convexity_scan(const BigIntSeq& seq, std::size_t n_min,
                                                  std::size_t n_max, unsigned threads = 1) {
  if (n_min < 2) throw std::invalid_argument("log-convexity scan requires n_min > 1");
  return detail::curvature_scan(seq, n_min, n_max, 1, "log-convexity", threads);
}

/// All 1 <= a <= b with a + b <= max_sum: violation iff c(a) c(b) < c(a+b),
/// equality recorded separately. Pairs are ordered by (a, b). The threshold
/// field is one more than the largest violating sum a + b.
inline ScanReport<IndexPair> bessenrodt_ono_scan(const BigIntSeq& seq, std::size_t max_sum,
                                                 unsigned threads = 1) {
  if (max_sum < 2) throw std::invalid_argument("bessenrodt_ono_scan requires max_sum >= 2");
  if (max_sum > seq.max_index()) throw std::out_of_range("scan range exceeds the sequence table");
  ScanReport<IndexPair> report;
  report.property = "bessenrodt-ono";
  report.range_lo = 2;
  report.range_hi = max_sum;
  detail::chunked_scan<IndexPair>(
      1, max_sum / 2, threads,
      [&](std::size_t a_lo, std::size_t a_hi, std::vector<IndexPair>& v, std::vector<IndexPair>& e) {
        mpz_class prod;
        for (std::size_t a = a_lo; a <= a_hi; ++a) {
          for (std::size_t b = a; a + b <= max_sum; ++b) {
            prod = seq[a] * seq[b];
            const int s = cmp(prod, seq[a + b]);
            if (s < 0) {
              v.emplace_back(a, b);
            } else if (s == 0) {
              e.emplace_back(a, b);
            }
          }
        }
      },
      report.violations, report.equalities);
  std::size_t largest = 1;
  for (const auto& [a, b] : report.violations) largest = std::max(largest, a + b);
  report.minimal_threshold = report.violations.empty() ? 2 : largest + 1;
  return report;
}

}  // namespace ntuple

#endif  // NTUPLE_INEQUALITIES_HPP

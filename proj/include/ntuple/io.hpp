#ifndef NTUPLE_IO_HPP
#define NTUPLE_IO_HPP

#include <cstddef>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "ntuple/arith.hpp"
#include "ntuple/asymptotics.hpp"
#include "ntuple/inequalities.hpp"
#include "ntuple/series.hpp"

namespace ntuple {

using Json = nlohmann::ordered_json;

// Sequences ------------------------------------------------------------------

inline void write_sequence_csv(std::ostream& os, const BigIntSeq& seq) {
  os << "n,value\n";
  for (std::size_t n = 0; n < seq.size(); ++n) os << n + seq.offset << ',' << seq.values[n] << '\n';
}

/// Array of decimal strings (values overflow 64 bits quickly).
inline Json sequence_json(const BigIntSeq& seq) {
  Json arr = Json::array();
  for (const auto& v : seq.values) arr.push_back(v.get_str());
  return arr;
}

inline void write_sequence_json(std::ostream& os, const BigIntSeq& seq) {
  os << sequence_json(seq).dump() << '\n';
}

/// Reads non-negative integers for an explicit exponent table: one value
/// per line, or `n,value` rows (a header line is skipped). Blank lines and
/// lines starting with '#' are ignored.
inline Table read_table(std::istream& is) {
  Table t;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    const std::string field = comma == std::string::npos ? line : line.substr(comma + 1);
    mpz_class v;
    if (v.set_str(field, 10) != 0) {
      if (t.values.empty()) continue;  // header
      throw std::invalid_argument("table file: cannot parse '" + line + "'");
    }
    if (v < 0) throw std::invalid_argument("table file: negative value '" + line + "'");
    t.values.push_back(v);
  }
  return t;
}

inline Table read_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file " + path);
  return read_table(in);
}

// Comparison rows ------------------------------------------------------------

inline void write_comparison_csv(std::ostream& os, const std::vector<ComparisonRow>& rows,
                                 unsigned digits) {
  os << "n,exact,asym,ratio,log_error\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.exact << ',' << format_real(r.asym, digits) << ','
       << format_real(r.ratio, digits) << ',' << format_real(r.log_error, digits) << '\n';
  }
}

inline Json comparison_json(const std::vector<ComparisonRow>& rows, unsigned digits) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n},
                   {"exact", r.exact},
                   {"asym", format_real(r.asym, digits)},
                   {"ratio", format_real(r.ratio, digits)},
                   {"log_error", format_real(r.log_error, digits)}});
  }
  return arr;
}

// Scan reports ---------------------------------------------------------------

namespace detail {

inline Json index_json(std::size_t n) { return n; }
inline Json index_json(const IndexPair& p) { return Json::array({p.first, p.second}); }

}  // namespace detail

template <class Index>
Json scan_report_json(const ScanReport<Index>& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations) violations.push_back(detail::index_json(v));
  Json equalities = Json::array();
  for (const auto& e : r.equalities) equalities.push_back(detail::index_json(e));
  return {{"family", r.family},
          {"property", r.property},
          {"range", Json::array({r.range_lo, r.range_hi})},
          {"violations", violations},
          {"equalities", equalities},
          {"minimal_threshold", r.minimal_threshold}};
}

template <class Index>
void write_scan_text(std::ostream& os, const ScanReport<Index>& r) {
  auto show = [&os](const auto& list) {
    os << '[';
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i) os << ", ";
      if constexpr (std::is_same_v<Index, IndexPair>) {
        os << '(' << list[i].first << ',' << list[i].second << ')';
      } else {
        os << list[i];
      }
    }
    os << "]\n";
  };
  os << "family: " << r.family << '\n'
     << "property: " << r.property << '\n'
     << "range: [" << r.range_lo << ", " << r.range_hi << "]\n"
     << "violations (" << r.violations.size() << "): ";
  show(r.violations);
  os << "equalities (" << r.equalities.size() << "): ";
  show(r.equalities);
  os << "minimal_threshold (within window): " << r.minimal_threshold << '\n';
}

}  // namespace ntuple

#endif  // NTUPLE_IO_HPP

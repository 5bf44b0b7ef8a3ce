#ifndef NTUPLE_CLI_HPP
#define NTUPLE_CLI_HPP

#include <cstddef>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "CLI11.hpp"

#include "ntuple/arith.hpp"
#include "ntuple/asymptotics.hpp"
#include "ntuple/inequalities.hpp"
#include "ntuple/io.hpp"
#include "ntuple/lfunction.hpp"
#include "ntuple/precision.hpp"
#include "ntuple/saddle.hpp"
#include "ntuple/series.hpp"

namespace ntuple {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string subcommand;
  std::string family = "ntuple";
  unsigned ell = 2;
  unsigned d = 0;
  unsigned k = 3;
  std::string table_path;
  std::size_t max_n = 100;
  std::size_t min_n = 2;
  std::size_t max_sum = 200;
  std::size_t n = 1;
  unsigned digits = PrecisionContext::kDefaultDigits;
  unsigned terms = 0;  // 0: ell terms for three-pole families
  std::vector<std::size_t> points{100, 1000, 10000};
  std::string format;
  std::string out;
  unsigned threads = 1;
  std::string oracle;
};

namespace cli_detail {

inline ExponentSpec family_spec(const RunConfig& cfg) {
  if (cfg.family == "ntuple") return ntuple_exponent(cfg.ell);
  if (cfg.family == "power") return Power{cfg.d};
  if (cfg.family == "polygonal") {
    if (cfg.k < 3) throw std::invalid_argument("polygonal family requires --k >= 3");
    return PolygonalIndicator{cfg.k};
  }
  if (cfg.family == "table-file") {
    if (cfg.table_path.empty()) throw std::invalid_argument("table-file family requires --table");
    return read_table_file(cfg.table_path);
  }
  throw std::invalid_argument("unknown family '" + cfg.family + "'");
}

inline std::string family_tag(const RunConfig& cfg) {
  if (cfg.family == "ntuple") return "ntuple(ell=" + std::to_string(cfg.ell) + ")";
  if (cfg.family == "power") return "power(d=" + std::to_string(cfg.d) + ")";
  if (cfg.family == "polygonal") return "polygonal(k=" + std::to_string(cfg.k) + ")";
  return "table-file(" + cfg.table_path + ")";
}

inline LSeriesData family_lseries(const RunConfig& cfg, const PrecisionContext& ctx) {
  if (cfg.family == "ntuple") return lf_data_ntuple(cfg.ell, ctx);
  if (cfg.family == "power") return lf_data_power(cfg.d, ctx);
  throw std::invalid_argument("asymptotics are available for the ntuple and power families only");
}

inline void print_pairs(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
}

inline int cmd_seq(const RunConfig& cfg, std::ostream& os) {
  const BigIntSeq seq = expand_product(family_spec(cfg), cfg.max_n, cfg.threads);
  if (cfg.format == "json") {
    write_sequence_json(os, seq);
  } else if (cfg.format == "text") {
    for (std::size_t i = 0; i < seq.size(); ++i) os << (i ? "," : "") << seq.values[i];
    os << '\n';
  } else {
    write_sequence_csv(os, seq);
  }
  return 0;
}

inline int cmd_gl(const RunConfig& cfg, std::ostream& os) {
  const IntTable g = subgroup_count_table(cfg.ell, cfg.max_n);
  if (cfg.format == "json") {
    Json arr = Json::array();
    for (std::size_t n = 1; n < g.size(); ++n) arr.push_back(g[n].get_str());
    os << arr.dump() << '\n';
  } else {
    os << "n,value\n";
    for (std::size_t n = 1; n < g.size(); ++n) os << n << ',' << g[n] << '\n';
  }
  return 0;
}

inline int cmd_constants(const RunConfig& cfg, std::ostream& os) {
  const PrecisionContext ctx(cfg.digits);
  auto scope = ctx.activate();
  const LSeriesData data = family_lseries(cfg, ctx);
  const AsymptoticExpansion e = expansion_for(data, ctx);
  const unsigned digits = cfg.digits;
  auto R = [digits](const Real& x) { return format_real(x, digits); };

  std::vector<Real> K = e.K;
  if (e.kind == ExpansionKind::kThreePole && cfg.terms > 0) {
    K = rho_series_three_pole(cfg.ell, cfg.terms, data, ctx).K;
  } else if (e.kind == ExpansionKind::kTwoPole && cfg.terms > 0) {
    K = two_pole_K_series(data.poles[0].position, data.poles[1].position, pole_weight(data.poles[0], ctx),
                          pole_weight(data.poles[1], ctx), cfg.terms, ctx);
  }

  if (cfg.format == "json") {
    Json poles = Json::array();
    for (const auto& p : data.poles) {
      poles.push_back({{"position", format_rational(p.position)}, {"residue", R(p.residue)}});
    }
    Json lseries = {{"family", family_tag(cfg)},
                    {"alpha", format_rational(data.alpha)},
                    {"poles", poles},
                    {"L(0)", format_rational(data.l_at_zero_exact)},
                    {"L'(0)", R(data.l_prime_at_zero)}};
    if (data.c1) lseries["c1"] = R(*data.c1);
    if (data.c2) lseries["c2"] = R(*data.c2);
    if (data.c3) lseries["c3"] = R(*data.c3);
    Json terms = Json::array();
    for (std::size_t k = 0; k < e.terms.size(); ++k) {
      terms.push_back({{"k", k + 1}, {"A", R(e.terms[k].A)}, {"lambda", format_rational(e.terms[k].lambda)}});
    }
    Json ks = Json::array();
    for (const auto& v : K) ks.push_back(R(v));
    Json expansion = {{"kind", to_string(e.kind)},
                      {"C", R(e.C)},
                      {"C_folded", R(folded_prefactor(e))},
                      {"b", format_rational(e.b)},
                      {"terms", terms},
                      {"K", ks},
                      {"correction_step", format_rational(e.correction_step)}};
    os << Json{{"lseries", lseries}, {"expansion", expansion}}.dump(2) << '\n';
    return 0;
  }

  os << "family = " << family_tag(cfg) << '\n' << "alpha = " << format_rational(data.alpha) << '\n';
  for (const auto& p : data.poles) {
    os << "residue[" << format_rational(p.position) << "] = " << R(p.residue) << '\n';
  }
  print_pairs(os, {{"L(0)", format_rational(data.l_at_zero_exact)}, {"L'(0)", R(data.l_prime_at_zero)}});
  if (data.c1) os << "c1 = " << R(*data.c1) << '\n';
  if (data.c2) os << "c2 = " << R(*data.c2) << '\n';
  if (data.c3) os << "c3 = " << R(*data.c3) << '\n';
  os << "kind = " << to_string(e.kind) << '\n';
  for (std::size_t k = 0; k < e.terms.size(); ++k) {
    os << "A_" << k + 1 << " = " << R(e.terms[k].A) << "  (n^" << format_rational(e.terms[k].lambda)
       << ")\n";
  }
  print_pairs(os, {{"C", R(e.C)}, {"C_folded", R(folded_prefactor(e))}, {"b", format_rational(e.b)}});
  for (std::size_t j = 0; j < K.size(); ++j) os << "K_" << j + 1 << " = " << R(K[j]) << '\n';
  return 0;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& os) {
  if (cfg.points.empty()) throw std::invalid_argument("--points must not be empty");
  const PrecisionContext ctx(cfg.digits);
  auto scope = ctx.activate();
  std::size_t top = 0;
  for (auto p : cfg.points) top = std::max(top, p);
  const BigIntSeq seq = expand_product(family_spec(cfg), top, cfg.threads);
  const AsymptoticExpansion e = expansion_for(family_lseries(cfg, ctx), ctx);
  const auto rows = compare_exact_asym(seq, e, cfg.points, ctx);
  const unsigned shown = std::min(cfg.digits, 20u);
  if (cfg.format == "json") {
    os << comparison_json(rows, shown).dump(2) << '\n';
  } else {
    write_comparison_csv(os, rows, shown);
  }
  return 0;
}

template <class Index>
void emit_scan(const RunConfig& cfg, ScanReport<Index> report, std::ostream& os) {
  report.family = family_tag(cfg);
  if (cfg.format == "json") {
    os << scan_report_json(report).dump(2) << '\n';
  } else {
    write_scan_text(os, report);
  }
}

inline int cmd_logconcave(const RunConfig& cfg, std::ostream& os) {
  const BigIntSeq seq = expand_product(family_spec(cfg), cfg.max_n + 1, cfg.threads);
  emit_scan(cfg, log_concavity_scan(seq, cfg.min_n, cfg.max_n, cfg.threads), os);
  return 0;
}

inline int cmd_logconvex(const RunConfig& cfg, std::ostream& os) {
  BigIntSeq seq = expand_product(family_spec(cfg), cfg.max_n + 1, cfg.threads);
  mpz_class fact = 1;
  for (std::size_t n = 1; n < seq.size(); ++n) {
    fact *= static_cast<unsigned long>(n);
    seq.values[n] *= fact;
  }
  emit_scan(cfg, log_convexity_scan(seq, std::max<std::size_t>(cfg.min_n, 2), cfg.max_n, cfg.threads),
            os);
  return 0;
}

inline int cmd_bo(const RunConfig& cfg, std::ostream& os) {
  const BigIntSeq seq = expand_product(family_spec(cfg), cfg.max_sum, cfg.threads);
  emit_scan(cfg, bessenrodt_ono_scan(seq, cfg.max_sum, cfg.threads), os);
  return 0;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& os) {
  if (cfg.oracle == "hnf") {
    os << hnf_subgroup_count(cfg.ell, static_cast<unsigned>(cfg.n)) << '\n';
  } else if (cfg.oracle == "commuting") {
    os << brute_force_commuting(cfg.ell, static_cast<unsigned>(cfg.n)) << '\n';
  } else if (cfg.oracle == "direct") {
    const BigIntSeq seq = expand_product_direct(family_spec(cfg), cfg.max_n);
    if (cfg.format == "json") {
      write_sequence_json(os, seq);
    } else {
      write_sequence_csv(os, seq);
    }
  } else {
    throw std::invalid_argument("unknown oracle '" + cfg.oracle + "'");
  }
  return 0;
}

}  // namespace cli_detail

/// Parses argv and runs one subcommand. Data goes to `out` (or --out);
/// diagnostics and errors go to `err`. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Exact sequences, asymptotic expansions and inequality scans for commuting tuples"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("ntuple ") + kVersion);

  auto add_family = [&cfg](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "ntuple | power | polygonal | table-file")
        ->check(CLI::IsMember({"ntuple", "power", "polygonal", "table-file"}))
        ->capture_default_str();
    sub->add_option("--ell", cfg.ell, "tuple length for the ntuple family")->capture_default_str();
    sub->add_option("--d", cfg.d, "exponent d of the power family n^d")->capture_default_str();
    sub->add_option("--k", cfg.k, "polygon order of the polygonal family")->capture_default_str();
    sub->add_option("--table", cfg.table_path, "exponent values f(1), f(2), ... for table-file");
    sub->add_option("--threads", cfg.threads, "worker threads for exact integer work")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
  };
  auto add_output = [&cfg](CLI::App* sub, std::vector<std::string> formats, std::string def) {
    sub->add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember(formats))
        ->default_str(def);
    sub->add_option("--out", cfg.out, "write data to this file instead of stdout");
  };
  auto add_digits = [&cfg](CLI::App* sub) {
    sub->add_option("--digits", cfg.digits, "decimal working precision")
        ->check(CLI::Range(50u, 100000u))
        ->capture_default_str();
  };

  std::vector<std::pair<CLI::App*, std::string>> defaults;

  auto* seq = app.add_subcommand("seq", "exact coefficients p_f(0..max-n)");
  add_family(seq);
  seq->add_option("--max-n", cfg.max_n, "largest index")->check(CLI::Range(std::size_t{1}, std::size_t{100000}))->capture_default_str();
  add_output(seq, {"csv", "json", "text"}, "csv");
  defaults.emplace_back(seq, "csv");

  auto* gl = app.add_subcommand("gl", "subgroup counts g_ell(1..max-n)");
  gl->add_option("--ell", cfg.ell, "lattice rank")->capture_default_str();
  gl->add_option("--max-n", cfg.max_n, "largest index")->check(CLI::Range(std::size_t{1}, std::size_t{100000}))->capture_default_str();
  add_output(gl, {"csv", "json"}, "csv");
  defaults.emplace_back(gl, "csv");

  auto* constants = app.add_subcommand("constants", "L-series data and expansion constants");
  constants->add_option("--family", cfg.family, "ntuple | power")
      ->check(CLI::IsMember({"ntuple", "power"}))
      ->capture_default_str();
  constants->add_option("--ell", cfg.ell, "tuple length")->capture_default_str();
  constants->add_option("--d", cfg.d, "power family exponent")->capture_default_str();
  constants->add_option("--terms", cfg.terms, "number of saddle coefficients K_j to print")
      ->check(CLI::Range(0u, kMaxSaddleTerms));
  add_digits(constants);
  add_output(constants, {"text", "json"}, "text");
  defaults.emplace_back(constants, "text");

  auto* compare = app.add_subcommand("compare", "exact values against the asymptotic expansion");
  add_family(compare);
  compare->add_option("--points", cfg.points, "indices to compare")->delimiter(',')->capture_default_str();
  add_digits(compare);
  add_output(compare, {"csv", "json"}, "csv");
  defaults.emplace_back(compare, "csv");

  auto* logconcave = app.add_subcommand("logconcave", "exact log-concavity scan");
  add_family(logconcave);
  logconcave->add_option("--max-n", cfg.max_n, "last index scanned")->capture_default_str();
  logconcave->add_option("--min-n", cfg.min_n, "first index scanned")->check(CLI::PositiveNumber)->capture_default_str();
  add_output(logconcave, {"text", "json"}, "text");
  defaults.emplace_back(logconcave, "text");

  auto* logconvex = app.add_subcommand("logconvex", "exact log-convexity scan of n! p_f(n)");
  add_family(logconvex);
  logconvex->add_option("--max-n", cfg.max_n, "last index scanned")->capture_default_str();
  logconvex->add_option("--min-n", cfg.min_n, "first index scanned (at least 2)")->capture_default_str();
  add_output(logconvex, {"text", "json"}, "text");
  defaults.emplace_back(logconvex, "text");

  auto* bo = app.add_subcommand("bo", "Bessenrodt-Ono scan c(a)c(b) vs c(a+b)");
  add_family(bo);
  bo->add_option("--max-sum", cfg.max_sum, "largest a + b")->capture_default_str();
  add_output(bo, {"text", "json"}, "text");
  defaults.emplace_back(bo, "text");

  auto* oracle = app.add_subcommand("oracle", "independent brute-force oracles");
  oracle->require_subcommand(1);
  auto* hnf = oracle->add_subcommand("hnf", "count index-n sublattices of Z^ell by HNF enumeration");
  hnf->add_option("--ell", cfg.ell, "rank (1..4)")->required();
  hnf->add_option("--n", cfg.n, "index (1..64)")->required();
  auto* commuting = oracle->add_subcommand("commuting", "count commuting ell-tuples in S_n");
  commuting->add_option("--ell", cfg.ell, "tuple length (1..3)")->required();
  commuting->add_option("--n", cfg.n, "degree (0..5)")->required();
  auto* direct = oracle->add_subcommand("direct", "product expansion by binomial series");
  add_family(direct);
  direct->add_option("--max-n", cfg.max_n, "largest index (<= 500)")->capture_default_str();
  add_output(direct, {"csv", "json"}, "csv");
  defaults.emplace_back(direct, "csv");
  hnf->add_option("--out", cfg.out, "write data to this file instead of stdout");
  commuting->add_option("--out", cfg.out, "write data to this file instead of stdout");

  // Each subcommand owns its default format; the shared field is filled
  // after parsing.
  cfg.format.clear();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    return code;
  }

  try {
    std::ostream* target = &out;
    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file " + cfg.out);
      target = &file;
    }
    for (const auto& [sub, def] : defaults) {
      if (sub->parsed() && cfg.format.empty()) cfg.format = def;
    }
    if (seq->parsed()) return cli_detail::cmd_seq(cfg, *target);
    if (gl->parsed()) return cli_detail::cmd_gl(cfg, *target);
    if (constants->parsed()) return cli_detail::cmd_constants(cfg, *target);
    if (compare->parsed()) return cli_detail::cmd_compare(cfg, *target);
    if (logconcave->parsed()) return cli_detail::cmd_logconcave(cfg, *target);
    if (logconvex->parsed()) return cli_detail::cmd_logconvex(cfg, *target);
    if (bo->parsed()) return cli_detail::cmd_bo(cfg, *target);
    if (oracle->parsed()) {
      cfg.oracle = hnf->parsed() ? "hnf" : commuting->parsed() ? "commuting" : "direct";
      return cli_detail::cmd_oracle(cfg, *target);
    }
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace ntuple

#endif  // NTUPLE_CLI_HPP

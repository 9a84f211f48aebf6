#pragma once

// Command-line front end. run() is separate from main() so the test suites
// can drive the exact code path the binary uses.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esnd/esnd.hpp"

#ifndef ESND_FIXTURE_DIR
#define ESND_FIXTURE_DIR "fixtures"
#endif

namespace esnd::cli {

enum class Format { Text, Json, Csv };

struct RunConfig {
  std::string subcommand;
  std::string sequence;
  std::uint64_t limit = 0;
  std::uint64_t prime_bound = kDefaultPrimeBound;
  unsigned exponent_bound = kDefaultExponentBound;
  double width = kDefaultTargetWidth;
  unsigned max_term = 6;
  Format format = Format::Text;
  std::string out_path;
  std::string suite;
  std::string fixture_dir = ESND_FIXTURE_DIR;
};

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Positive integer flag value; scientific notation such as 1e7 is accepted
/// when it denotes an integer exactly.
inline std::uint64_t parse_count(const std::string& text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc{} && ptr == text.data() + text.size()) {
    if (v == 0) throw CLI::ValidationError("value must be positive: " + text);
    return v;
  }
  double d = 0;
  auto [dptr, dec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (dec != std::errc{} || dptr != text.data() + text.size() || !(d >= 1) || d > 1.8e19 || std::floor(d) != d)
    throw CLI::ValidationError("expected a positive integer: " + text);
  return static_cast<std::uint64_t>(d);
}

inline std::string sig12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Bracket endpoints are printed exactly (round-trip form), never rounded.
inline std::string bracket_text(double lo, double hi) {
  return "[" + io::format_double(lo) + ", " + io::format_double(hi) + "]";
}

namespace detail {

inline void render_density(std::ostream& os, const DensityBracket& b, Format f) {
  switch (f) {
  case Format::Json: os << io::to_json(b).dump(2) << '\n'; break;
  case Format::Csv:
    io::write_csv_row(os, io::kDensityHeader);
    io::write_csv_row(os, io::density_row(b));
    break;
  case Format::Text:
    os << "sequence        " << b.sequence << '\n'
       << "density         " << sig12(b.point) << ' ' << bracket_text(b.lo, b.hi) << '\n'
       << "width           " << sig12(b.width()) << (b.meets_target ? " (target met)" : " (ABOVE TARGET)") << '\n'
       << "prime bound     " << b.prime_bound << '\n'
       << "exponent bound  " << b.exponent_bound << '\n'
       << "prime tail      " << bracket_text(b.tail.prime_tail_lo, b.tail.prime_tail_hi) << '\n'
       << "exponent tail   " << sig12(b.tail.exponent_tail_bound) << '\n'
       << "rounding        " << sig12(b.tail.rounding_bound) << '\n';
    break;
  }
}

inline void render_count(std::ostream& os, const CountReport& r, Format f) {
  switch (f) {
  case Format::Json: os << io::to_json(r).dump(2) << '\n'; break;
  case Format::Csv:
    io::write_csv_row(os, io::kCountHeader);
    io::write_csv_row(os, io::count_row(r));
    break;
  case Format::Text:
    os << "sequence        " << r.sequence << '\n'
       << "x               " << r.x << '\n'
       << "count           " << r.count << '\n'
       << "density         " << sig12(r.density.point) << ' ' << bracket_text(r.density.lo, r.density.hi) << '\n'
       << "predicted h*x   " << sig12(r.predicted) << '\n'
       << "deviation       " << sig12(r.deviation) << " +/- " << sig12(r.deviation_uncertainty) << '\n'
       << "deviation/sqrtx " << sig12(r.deviation / std::sqrt(static_cast<double>(r.x))) << '\n';
    if (r.envelope)
      os << "envelope        " << sig12(*r.envelope) << '\n' << "ratio           " << sig12(*r.ratio) << '\n';
    else
      os << "envelope        undefined for x < 16\n";
    break;
  }
}

inline void render_gaps(std::ostream& os, const GapCatalog& c, Format f) {
  switch (f) {
  case Format::Json: os << io::to_json(c).dump(2) << '\n'; break;
  case Format::Csv: io::write_gaps_csv(os, c); break;
  case Format::Text:
    for (const auto& g : c.gaps) {
      os << g.s1.to_string() << "  (" << sig12(g.left.point) << ", " << sig12(g.right.point) << ")  length "
         << sig12(g.length()) << "  left " << bracket_text(g.left.lo, g.left.hi) << "  right "
         << bracket_text(g.right.lo, g.right.hi) << "  s2 " << g.s2.to_string() << '\n';
    }
    os << "gaps            " << c.gaps.size() << '\n'
       << "total length    " << sig12(c.total_length) << '\n'
       << "disjoint        " << to_string(c.disjoint.status)
       << (c.disjoint.detail.empty() ? "" : " (" + c.disjoint.detail + ")") << '\n';
    break;
  }
}

inline void render_measure(std::ostream& os, const std::vector<GapMeasure>& rows, bool monotone, Format f) {
  switch (f) {
  case Format::Json: {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& m : rows) arr.push_back(io::to_json(m));
    os << nlohmann::json{{"rows", arr}, {"monotone", monotone}, {"conjecture", "open"}, {"note", kConjectureNote}}
              .dump(2)
       << '\n';
    break;
  }
  case Format::Csv:
    io::write_csv_row(os, io::kMeasureHeader);
    for (const auto& m : rows) io::write_csv_row(os, io::measure_row(m));
    break;
  case Format::Text:
    os << "B   gaps  total_length    confidence                                 target\n";
    for (const auto& m : rows) {
      char line[256];
      std::snprintf(line, sizeof line, "%-3u %-5zu %-15s %-42s %s\n", m.max_term, m.gap_count,
                    sig12(m.total_length).c_str(), bracket_text(m.lower_conf, m.upper_conf).c_str(),
                    sig12(m.target).c_str());
      os << line;
    }
    os << "monotone in B   " << (monotone ? "yes" : "NO") << '\n'
       << "conjecture      OPEN: " << kConjectureNote << '\n';
    break;
  }
}

inline void render_suite(std::ostream& os, const verify::SuiteResult& r) {
  os << "suite           " << r.name << '\n'
     << "checks          " << r.checked << '\n'
     << "result          " << (r.passed ? "PASS" : "FAIL") << '\n';
  for (const auto& n : r.notes) os << "note            " << n << '\n';
  if (!r.passed) os << "counterexample  " << r.counterexample << '\n';
}

inline int execute(const RunConfig& cfg, std::ostream& os, std::ostream& es) {
  const auto& sub = cfg.subcommand;
  if (sub == "density") {
    const auto s = parse_descriptor(cfg.sequence);
    const auto b = density(s, {.prime_bound = cfg.prime_bound, .exponent_bound = cfg.exponent_bound,
                               .target_width = cfg.width});
    render_density(os, b, cfg.format);
    if (!b.meets_target) es << "warning: bracket width " << sig12(b.width()) << " above target " << cfg.width << '\n';
    return kExitOk;
  }
  if (sub == "count") {
    const auto s = parse_descriptor(cfg.sequence);
    const auto r = sieve_count(s, cfg.limit, {},
                               {.prime_bound = cfg.prime_bound, .exponent_bound = cfg.exponent_bound,
                                .target_width = cfg.width});
    render_count(os, r, cfg.format);
    return kExitOk;
  }
  if (sub == "enumerate") {
    const auto s = parse_descriptor(cfg.sequence);
    const auto members = enumerate(s, cfg.limit);
    switch (cfg.format) {
    case Format::Json: os << nlohmann::json{{"sequence", s.to_string()}, {"x", cfg.limit}, {"members", members}}.dump() << '\n'; break;
    case Format::Csv:
      os << "n\n";
      for (auto m : members) os << m << '\n';
      break;
    case Format::Text:
      for (auto m : members) os << m << '\n';
      break;
    }
    return kExitOk;
  }
  if (sub == "gaps") {
    const auto catalog = gap_catalog(cfg.max_term, DensityEvaluator(cfg.prime_bound, cfg.exponent_bound), cfg.width);
    render_gaps(os, catalog, cfg.format);
    if (!catalog.disjoint.ok()) {
      es << "disjointness " << to_string(catalog.disjoint.status) << ": " << catalog.disjoint.detail << '\n';
      return kExitComputation;
    }
    return kExitOk;
  }
  if (sub == "measure") {
    DensityEvaluator eval(cfg.prime_bound, cfg.exponent_bound);
    std::vector<GapMeasure> rows;
    bool monotone = true;
    for (unsigned b = 2; b <= cfg.max_term; ++b) {
      rows.push_back(gap_measure(gap_catalog(b, eval, cfg.width)));
      if (rows.size() > 1 && rows.back().total_length < rows[rows.size() - 2].total_length) monotone = false;
    }
    render_measure(os, rows, monotone, cfg.format);
    return monotone ? kExitOk : kExitComputation;
  }
  if (sub == "verify") {
    verify::SuiteResult r;
    DensityEvaluator eval(cfg.prime_bound, cfg.exponent_bound);
    if (cfg.suite == "lemma4") r = verify::comparator_consistency(cfg.max_term, std::min(cfg.width, 1e-10), eval);
    else if (cfg.suite == "disjoint") r = verify::disjoint(cfg.max_term, std::min(cfg.width, kGapWidth), eval);
    else if (cfg.suite == "convergence") r = verify::convergence();
    else if (cfg.suite == "oeis") r = verify::oeis(cfg.fixture_dir);
    render_suite(os, r);
    return r.passed ? kExitOk : kExitComputation;
  }
  es << "unknown subcommand\n";
  return kExitUsage;
}

} // namespace detail

/// Parses argv-style arguments (without the program name) and runs the
/// selected subcommand. Exit codes: 0 success, 1 computation error, 2 usage.
inline RunResult run(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"Euler product densities, sieve counts and density gaps for integers with restricted prime exponents", "esnd"};
  app.require_subcommand(1);

  auto count_option = [](CLI::App* sub, const std::string& name, std::uint64_t& target, const std::string& help) {
    return sub->add_option_function<std::string>(name, [&target](const std::string& v) { target = parse_count(v); }, help);
  };
  const std::map<std::string, Format> formats{{"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};
  auto common = [&](CLI::App* sub) {
    count_option(sub, "--primes,-P", cfg.prime_bound, "Prime bound P for the Euler product (default 1e6)");
    sub->add_option("--exponents,-I", cfg.exponent_bound, "Exponent bound I for direct summation (default 64)")
        ->check(CLI::Range(2u, 100000u));
    sub->add_option("--width,-w", cfg.width, "Target bracket width")->check(CLI::PositiveNumber);
    sub->add_option("--format,-f", cfg.format, "Output format: text, json, csv")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--out,-o", cfg.out_path, "Write output to this file instead of stdout");
  };

  auto* den = app.add_subcommand("density", "Certified bracket for h(E(S))");
  den->add_option("--seq,-s", cfg.sequence, "Sequence descriptor")->required();
  common(den);

  auto* cnt = app.add_subcommand("count", "Sieve count of E(S) up to x against h*x and the error envelope");
  cnt->add_option("--seq,-s", cfg.sequence, "Sequence descriptor")->required();
  count_option(cnt, "--limit,-x", cfg.limit, "Upper limit x")->required();
  common(cnt);

  auto* en = app.add_subcommand("enumerate", "List members of E(S) up to x");
  en->add_option("--seq,-s", cfg.sequence, "Sequence descriptor")->required();
  count_option(en, "--limit,-x", cfg.limit, "Upper limit x")->required();
  common(en);

  auto* gp = app.add_subcommand("gaps", "Gap catalog for all finite S1 with terms <= B");
  gp->add_option("--max-term,-B", cfg.max_term, "Largest allowed term B")->required()->check(CLI::Range(2u, kMaxCatalogTerm));
  common(gp);

  auto* ms = app.add_subcommand("measure", "Total gap length for B = 2..max-term");
  ms->add_option("--max-term,-B", cfg.max_term, "Largest allowed term B")->required()->check(CLI::Range(2u, kMaxCatalogTerm));
  common(ms);

  auto* vf = app.add_subcommand("verify", "Run a verification suite");
  vf->add_option("suite", cfg.suite, "lemma4 (comparator consistency), disjoint, convergence or oeis")
      ->required()
      ->check(CLI::IsMember({"lemma4", "disjoint", "convergence", "oeis"}));
  vf->add_option("--max-term,-B", cfg.max_term, "Term bound for lemma4 and disjoint (default 6)")
      ->check(CLI::Range(2u, kMaxCatalogTerm));
  vf->add_option("--fixtures", cfg.fixture_dir, "Directory holding the OEIS fixture files");
  common(vf);

  RunResult result;
  std::ostringstream out, err;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    bool width_given = false;
    app.parse(reversed);
    for (auto* sub : app.get_subcommands()) {
      cfg.subcommand = sub->get_name();
      width_given = sub->count("--width") > 0;
    }
    if (cfg.subcommand == "count" && !width_given) cfg.width = kCountDensityWidth;
    if (cfg.subcommand == "gaps" && !width_given) cfg.width = kGapWidth;
    if (cfg.subcommand == "measure" && !width_given) cfg.width = kGapWidth;
  } catch (const CLI::CallForHelp& e) {
    result.exit_code = app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    result.out = out.str();
    result.err = err.str();
    return result;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    result.exit_code = kExitUsage;
    result.out = out.str();
    result.err = err.str() + app.help();
    return result;
  }

  try {
    result.exit_code = detail::execute(cfg, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    result.exit_code = kExitComputation;
  }

  result.out = out.str();
  result.err = err.str();
  if (!cfg.out_path.empty() && result.exit_code != kExitUsage) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) {
      result.err += "error: cannot write " + cfg.out_path + '\n';
      result.exit_code = kExitComputation;
    } else {
      f << result.out;
      result.out.clear();
    }
  }
  return result;
}

} // namespace esnd::cli

#pragma once

// CSV and JSON forms of the library's reports, with matching readers.
// Doubles are written in shortest round-trip form.

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "esnd/density.hpp"
#include "esnd/enumeration.hpp"
#include "esnd/error.hpp"
#include "esnd/gaps.hpp"
#include "esnd/sequences.hpp"

namespace esnd::io {

using nlohmann::json;

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("invalid number '" + std::string(s) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError("invalid integer '" + std::string(s) + "'");
  return v;
}

// ---------------------------------------------------------------- CSV

using CsvRow = std::vector<std::string>;

inline std::string csv_field(std::string_view f) {
  if (f.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(f);
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& os, const CsvRow& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ',';
    os << csv_field(row[i]);
  }
  os << '\n';
}

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// line breaks.
inline std::vector<CsvRow> read_csv(std::istream& is) {
  std::vector<CsvRow> rows;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          field += '"';
          is.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void expect_header(const std::vector<CsvRow>& rows, const CsvRow& header) {
  if (rows.empty() || rows.front() != header) throw ParseError("unexpected CSV header");
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].size() != header.size()) throw ParseError("CSV row " + std::to_string(i) + " has wrong field count");
}

// ---------------------------------------------------------------- density

inline const CsvRow kDensityHeader{"sequence", "lo", "point", "hi", "width", "prime_bound", "exponent_bound"};

inline json to_json(const DensityBracket& b) {
  return {
      {"sequence", b.sequence},
      {"lo", b.lo},
      {"point", b.point},
      {"hi", b.hi},
      {"width", b.width()},
      {"prime_bound", b.prime_bound},
      {"exponent_bound", b.exponent_bound},
      {"target_width", b.target_width},
      {"meets_target", b.meets_target},
      {"tail_terms",
       {{"prime_tail_lo", b.tail.prime_tail_lo},
        {"prime_tail_hi", b.tail.prime_tail_hi},
        {"prime_tail_bound", b.tail.prime_tail_bound()},
        {"exponent_tail_bound", b.tail.exponent_tail_bound},
        {"rounding_bound", b.tail.rounding_bound}}},
  };
}

inline DensityBracket density_from_json(const json& j) {
  DensityBracket b;
  b.sequence = parse_descriptor(j.at("sequence").get<std::string>()).to_string();
  b.lo = j.at("lo").get<double>();
  b.point = j.at("point").get<double>();
  b.hi = j.at("hi").get<double>();
  b.prime_bound = j.at("prime_bound").get<std::uint64_t>();
  b.exponent_bound = j.at("exponent_bound").get<unsigned>();
  b.target_width = j.value("target_width", kDefaultTargetWidth);
  b.meets_target = j.value("meets_target", b.width() <= b.target_width);
  if (j.contains("tail_terms")) {
    const auto& t = j.at("tail_terms");
    b.tail.prime_tail_lo = t.at("prime_tail_lo").get<double>();
    b.tail.prime_tail_hi = t.at("prime_tail_hi").get<double>();
    b.tail.exponent_tail_bound = t.at("exponent_tail_bound").get<double>();
    b.tail.rounding_bound = t.at("rounding_bound").get<double>();
  }
  return b;
}

inline CsvRow density_row(const DensityBracket& b) {
  return {b.sequence,
          format_double(b.lo),
          format_double(b.point),
          format_double(b.hi),
          format_double(b.width()),
          std::to_string(b.prime_bound),
          std::to_string(b.exponent_bound)};
}

inline DensityBracket density_from_row(const CsvRow& r) {
  DensityBracket b;
  b.sequence = parse_descriptor(r.at(0)).to_string();
  b.lo = parse_double(r.at(1));
  b.point = parse_double(r.at(2));
  b.hi = parse_double(r.at(3));
  b.prime_bound = parse_uint(r.at(5));
  b.exponent_bound = static_cast<unsigned>(parse_uint(r.at(6)));
  return b;
}

// ---------------------------------------------------------------- counts

inline const CsvRow kCountHeader{"sequence", "x",        "count",    "predicted", "deviation",
                                 "envelope", "ratio",    "density_lo", "density_hi"};

inline json to_json(const CountReport& r) {
  json j = {
      {"sequence", r.sequence},
      {"x", r.x},
      {"count", r.count},
      {"predicted", r.predicted},
      {"deviation", r.deviation},
      {"deviation_uncertainty", r.deviation_uncertainty},
      {"envelope", r.envelope ? json(*r.envelope) : json(nullptr)},
      {"ratio", r.ratio ? json(*r.ratio) : json(nullptr)},
      {"density", to_json(r.density)},
  };
  return j;
}

inline CountReport count_from_json(const json& j) {
  CountReport r;
  r.sequence = parse_descriptor(j.at("sequence").get<std::string>()).to_string();
  r.x = j.at("x").get<std::uint64_t>();
  r.count = j.at("count").get<std::uint64_t>();
  r.predicted = j.at("predicted").get<double>();
  r.deviation = j.at("deviation").get<double>();
  r.deviation_uncertainty = j.value("deviation_uncertainty", 0.0);
  if (!j.at("envelope").is_null()) r.envelope = j.at("envelope").get<double>();
  if (!j.at("ratio").is_null()) r.ratio = j.at("ratio").get<double>();
  r.density = density_from_json(j.at("density"));
  return r;
}

inline CsvRow count_row(const CountReport& r) {
  return {r.sequence,
          std::to_string(r.x),
          std::to_string(r.count),
          format_double(r.predicted),
          format_double(r.deviation),
          r.envelope ? format_double(*r.envelope) : "",
          r.ratio ? format_double(*r.ratio) : "",
          format_double(r.density.lo),
          format_double(r.density.hi)};
}

// ---------------------------------------------------------------- gaps

inline const CsvRow kGapHeader{"s1", "s2", "left_lo", "left_hi", "right_lo", "right_hi", "length"};

// One exported gap, as read back from CSV or JSON.
struct GapRow {
  SSequence s1 = SSequence::finite({1});
  SSequence s2 = SSequence::finite({1});
  double left_lo = 0;
  double left_hi = 0;
  double right_lo = 0;
  double right_hi = 0;
  double length = 0;
};

inline GapRow gap_row(const GapInterval& g) {
  return {g.s1, g.s2, g.left.lo, g.left.hi, g.right.lo, g.right.hi, g.length()};
}

inline void write_gaps_csv(std::ostream& os, const GapCatalog& c) {
  write_csv_row(os, kGapHeader);
  for (const auto& g : c.gaps) {
    write_csv_row(os, {g.s1.to_string(), g.s2.to_string(), format_double(g.left.lo), format_double(g.left.hi),
                       format_double(g.right.lo), format_double(g.right.hi), format_double(g.length())});
  }
}

inline std::vector<GapRow> read_gaps_csv(std::istream& is) {
  const auto rows = read_csv(is);
  expect_header(rows, kGapHeader);
  std::vector<GapRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out.push_back({parse_descriptor(r[0]), parse_descriptor(r[1]), parse_double(r[2]), parse_double(r[3]),
                   parse_double(r[4]), parse_double(r[5]), parse_double(r[6])});
  }
  return out;
}

inline json to_json(const GapRow& g) {
  return {{"s1", g.s1.to_string()},   {"s2", g.s2.to_string()},     {"left_lo", g.left_lo},
          {"left_hi", g.left_hi},     {"right_lo", g.right_lo},     {"right_hi", g.right_hi},
          {"length", g.length}};
}

inline json to_json(const GapCatalog& c) {
  json gaps = json::array();
  for (const auto& g : c.gaps) gaps.push_back(to_json(gap_row(g)));
  return {{"max_term", c.max_term},
          {"gaps", gaps},
          {"total_length", c.total_length},
          {"disjoint", std::string(to_string(c.disjoint.status))}};
}

inline std::vector<GapRow> gaps_from_json(const json& j) {
  std::vector<GapRow> out;
  for (const auto& g : j.at("gaps")) {
    out.push_back({parse_descriptor(g.at("s1").get<std::string>()), parse_descriptor(g.at("s2").get<std::string>()),
                   g.at("left_lo").get<double>(), g.at("left_hi").get<double>(), g.at("right_lo").get<double>(),
                   g.at("right_hi").get<double>(), g.at("length").get<double>()});
  }
  return out;
}

// ---------------------------------------------------------------- measure

inline const CsvRow kMeasureHeader{"max_term", "gaps", "total_length", "lower_conf", "upper_conf", "target"};

inline json to_json(const GapMeasure& m) {
  return {{"max_term", m.max_term},       {"gaps", m.gap_count},          {"total_length", m.total_length},
          {"lower_conf", m.lower_conf},   {"upper_conf", m.upper_conf},   {"target", m.target}};
}

inline GapMeasure measure_from_json(const json& j) {
  GapMeasure m;
  m.max_term = j.at("max_term").get<unsigned>();
  m.gap_count = j.at("gaps").get<std::size_t>();
  m.total_length = j.at("total_length").get<double>();
  m.lower_conf = j.at("lower_conf").get<double>();
  m.upper_conf = j.at("upper_conf").get<double>();
  m.target = j.at("target").get<double>();
  return m;
}

inline CsvRow measure_row(const GapMeasure& m) {
  return {std::to_string(m.max_term),   std::to_string(m.gap_count), format_double(m.total_length),
          format_double(m.lower_conf),  format_double(m.upper_conf), format_double(m.target)};
}

// ---------------------------------------------------------------- fixtures

/// One integer per line; blank lines are ignored.
inline std::vector<std::uint64_t> read_integer_list(std::istream& is) {
  std::vector<std::uint64_t> out;
  std::string line;
  while (std::getline(is, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_uint(line));
  }
  return out;
}

} // namespace esnd::io

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <sstream>

#include "esnd/io.hpp"

using namespace esnd;
using namespace esnd::io;

TEST(Csv, QuotingRoundTrip) {
  const CsvRow row{"plain", "a,b", "say \"hi\"", "line\nbreak", "", "cofinite:1,3;tail=6"};
  std::stringstream ss;
  write_csv_row(ss, row);
  write_csv_row(ss, {"x", "y"});
  const auto rows = read_csv(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], row);
  EXPECT_EQ(rows[1], (CsvRow{"x", "y"}));
}

TEST(Csv, FieldQuoting) {
  EXPECT_EQ(csv_field("abc"), "abc");
  EXPECT_EQ(csv_field("finite:1,2"), "\"finite:1,2\"");
  EXPECT_EQ(csv_field("a\"b"), "\"a\"\"b\"");
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream bad("a,\"b\n");
  EXPECT_THROW(read_csv(bad), ParseError);
  std::stringstream short_row("s1,s2\nx\n");
  EXPECT_THROW(expect_header(read_csv(short_row), {"s1", "s2"}), ParseError);
  std::stringstream wrong("a,b\n");
  EXPECT_THROW(expect_header(read_csv(wrong), {"s1", "s2"}), ParseError);
}

TEST(Numbers, ShortestRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double v = dist(rng);
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(parse_double(format_double(std::numeric_limits<double>::denorm_min())),
            std::numeric_limits<double>::denorm_min());
  EXPECT_THROW(parse_double("0.5x"), ParseError);
  EXPECT_THROW(parse_uint("-3"), ParseError);
}

TEST(DensityIo, JsonAndCsvRoundTrip) {
  const auto b = density(parse_descriptor("cofinite:1;tail=3"));
  const auto j = to_json(b);
  EXPECT_TRUE(j.contains("tail_terms"));
  const auto back = density_from_json(json::parse(j.dump()));
  EXPECT_EQ(back.sequence, b.sequence);
  EXPECT_EQ(back.lo, b.lo);
  EXPECT_EQ(back.point, b.point);
  EXPECT_EQ(back.hi, b.hi);
  EXPECT_EQ(back.prime_bound, b.prime_bound);
  EXPECT_EQ(back.tail.prime_tail_lo, b.tail.prime_tail_lo);
  EXPECT_EQ(back.meets_target, b.meets_target);

  std::stringstream ss;
  write_csv_row(ss, kDensityHeader);
  write_csv_row(ss, density_row(b));
  const auto rows = read_csv(ss);
  expect_header(rows, kDensityHeader);
  const auto r = density_from_row(rows[1]);
  EXPECT_EQ(r.sequence, "cofinite:1;tail=3");
  EXPECT_EQ(r.lo, b.lo);
  EXPECT_EQ(r.hi, b.hi);
  EXPECT_EQ(r.exponent_bound, b.exponent_bound);
}

TEST(CountIo, JsonRoundTrip) {
  const auto r = sieve_count(SSequence::named(Family::Odd), 1000);
  const auto back = count_from_json(json::parse(to_json(r).dump()));
  EXPECT_EQ(back.count, r.count);
  EXPECT_EQ(back.deviation, r.deviation);
  EXPECT_EQ(back.envelope, r.envelope);
  EXPECT_EQ(back.density.hi, r.density.hi);

  const auto small = sieve_count(SSequence::named(Family::Odd), 10);
  const auto j = to_json(small);
  EXPECT_TRUE(j.at("envelope").is_null());
  EXPECT_FALSE(count_from_json(j).ratio.has_value());
  EXPECT_EQ(count_row(small)[5], "");
}

TEST(GapIo, CsvAndJsonRoundTrip) {
  const auto c = gap_catalog(4);
  std::stringstream ss;
  write_gaps_csv(ss, c);
  const auto rows = read_gaps_csv(ss);
  ASSERT_EQ(rows.size(), c.gaps.size());
  const auto from_json = gaps_from_json(json::parse(to_json(c).dump()));
  ASSERT_EQ(from_json.size(), c.gaps.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& g = c.gaps[i];
    for (const auto& r : {rows[i], from_json[i]}) {
      EXPECT_EQ(r.s1, g.s1);
      EXPECT_EQ(r.s2, g.s2);
      EXPECT_EQ(r.left_lo, g.left.lo);
      EXPECT_EQ(r.left_hi, g.left.hi);
      EXPECT_EQ(r.right_lo, g.right.lo);
      EXPECT_EQ(r.right_hi, g.right.hi);
      EXPECT_EQ(r.length, g.length());
    }
  }
  EXPECT_EQ(to_json(c).at("disjoint"), "disjoint");
}

TEST(MeasureIo, JsonRoundTrip) {
  const auto m = gap_measure(3);
  const auto back = measure_from_json(json::parse(to_json(m).dump()));
  EXPECT_EQ(back.max_term, 3u);
  EXPECT_EQ(back.gap_count, 3u);
  EXPECT_EQ(back.total_length, m.total_length);
  EXPECT_EQ(back.lower_conf, m.lower_conf);
  EXPECT_EQ(back.upper_conf, m.upper_conf);
  EXPECT_EQ(measure_row(m).size(), kMeasureHeader.size());
}

TEST(Fixtures, IntegerList) {
  std::stringstream ss("1\r\n2\n\n3 \n");
  EXPECT_EQ(read_integer_list(ss), (std::vector<std::uint64_t>{1, 2, 3}));
  std::stringstream bad("1\nx\n");
  EXPECT_THROW(read_integer_list(bad), ParseError);
}

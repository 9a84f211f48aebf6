#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <vector>

#include "esnd/enumeration.hpp"
#include "esnd/io.hpp"
#include "esnd/verify.hpp"

using namespace esnd;

namespace {

// Exponents by trial division; shares nothing with PrimeTable or the sieve.
bool brute_member(std::uint64_t n, const SSequence& s) {
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (!s.contains(e)) return false;
  }
  return true; // any leftover factor has exponent 1
}

std::vector<std::uint64_t> brute_list(const SSequence& s, std::uint64_t x) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n <= x; ++n)
    if (brute_member(n, s)) out.push_back(n);
  return out;
}

std::vector<SSequence> all_families() {
  std::vector<SSequence> out;
  for (const auto& [f, name] : kFamilyNames) out.push_back(SSequence::named(f));
  return out;
}

} // namespace

TEST(Enumeration, IsMember) {
  PrimeTable t(1000);
  EXPECT_TRUE(is_member(12, parse_descriptor("finite:1,2"), t));
  EXPECT_FALSE(is_member(8, SSequence::named(Family::Pow2), t));
  EXPECT_TRUE(is_member(16, SSequence::named(Family::Pow2), t));
  for (const auto& s : all_families()) EXPECT_TRUE(is_member(1, s, t));
  EXPECT_THROW(is_member(1001, parse_descriptor("finite:1"), t), DomainError);
}

TEST(Enumeration, ListedExamples) {
  EXPECT_EQ(enumerate(parse_descriptor("finite:1"), 20),
            (std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19}));
  std::vector<std::uint64_t> cubefree;
  for (std::uint64_t n = 1; n <= 20; ++n)
    if (n != 8 && n != 16) cubefree.push_back(n);
  EXPECT_EQ(enumerate(parse_descriptor("finite:1,2"), 20), cubefree);
  EXPECT_EQ(enumerate(SSequence::named(Family::Odd), 10), (std::vector<std::uint64_t>{1, 2, 3, 5, 6, 7, 8, 10}));
}

TEST(Enumeration, SquarefreeCounts) {
  EXPECT_EQ(sieve_member_count(parse_descriptor("finite:1"), 100), 61u);
  EXPECT_EQ(sieve_member_count(parse_descriptor("finite:1"), 1'000'000), 607926u);
}

TEST(Enumeration, SieveMatchesBruteForceForEveryFamily) {
  auto seqs = all_families();
  seqs.push_back(parse_descriptor("finite:1"));
  seqs.push_back(parse_descriptor("finite:1,2"));
  seqs.push_back(parse_descriptor("cofinite:1,3;tail=6"));
  PrimeTable table(100'000);
  for (const auto& s : seqs) {
    const auto sieved = enumerate(s, 100'000);
    EXPECT_EQ(sieved, brute_list(s, 100'000)) << s.to_string();
    std::vector<std::uint64_t> via_table;
    for (std::uint64_t n = 1; n <= 100'000; ++n)
      if (is_member(n, s, table)) via_table.push_back(n);
    EXPECT_EQ(sieved, via_table) << s.to_string();
    EXPECT_EQ(sieve_member_count(s, 100'000), sieved.size());
  }
}

TEST(Enumeration, SegmentationDoesNotChangeResults) {
  const auto s = SSequence::named(Family::Squares);
  const auto whole = enumerate(s, 200'000, {.segment = 1u << 20});
  EXPECT_EQ(enumerate(s, 200'000, {.segment = 997, .threads = 3}), whole);
  EXPECT_EQ(sieve_member_count(s, 200'000, {.segment = 4096, .threads = 1}), whole.size());
}

TEST(Enumeration, CountIsMonotoneAndBoundedBelowBySquarefree) {
  const auto squarefree = parse_descriptor("finite:1");
  for (const auto& s : all_families()) {
    std::uint64_t last = 0;
    for (std::uint64_t x = 1; x <= 50'000; x = x * 3 + 1) {
      const auto c = sieve_member_count(s, x);
      EXPECT_GE(c, last);
      EXPECT_LE(c, x);
      EXPECT_GE(c, sieve_member_count(squarefree, x));
      last = c;
    }
  }
  EXPECT_EQ(sieve_member_count(SSequence::named(Family::All), 100'000), 100'000u);
}

TEST(Enumeration, Budget) {
  EXPECT_THROW(sieve_member_count(parse_descriptor("finite:1"), 1000, {.memory_budget = 999}), BudgetError);
  EXPECT_THROW(enumerate(parse_descriptor("finite:1"), 0), DomainError);
}

TEST(Envelope, Values) {
  // 40-digit reference: sqrt(16) log 16 exp(7.443083 sqrt(log 16) / log log 16)
  EXPECT_NEAR(envelope(16), 2103714.900894153, 2103714.9 * 1e-13);
  EXPECT_THROW(envelope(15), DomainError);
  // Falls from x = 16 to a minimum at x = 41, then increases.
  EXPECT_GT(envelope(16), envelope(41));
  EXPECT_LT(envelope(41), envelope(40));
  EXPECT_LT(envelope(41), envelope(42));
  double last = 0;
  for (std::uint64_t x = 41; x < 1'000'000'000; x = x * 5 / 4) {
    const double e = envelope(x);
    EXPECT_GT(e, last) << x;
    last = e;
  }
  // envelope(x)/x -> 0: with L = log x, log(envelope/x) = -L/2 + log L +
  // c sqrt(L)/log L, which decreases without bound.
  auto log_ratio = [](double L) { return -0.5 * L + std::log(L) + kEnvelopeConstant * std::sqrt(L) / std::log(L); };
  double prev = log_ratio(100);
  for (double L : {200.0, 400.0, 690.0}) {
    EXPECT_LT(log_ratio(L), prev);
    prev = log_ratio(L);
  }
  EXPECT_LT(prev, -300);
}

TEST(CountReport, Fields) {
  const auto r = sieve_count(parse_descriptor("finite:1"), 100);
  EXPECT_EQ(r.count, 61u);
  EXPECT_NEAR(r.predicted, 60.792710185402663, 1e-9);
  EXPECT_NEAR(r.deviation, 0.207289814597337, 1e-9);
  ASSERT_TRUE(r.envelope.has_value());
  EXPECT_NEAR(*r.ratio, r.deviation / *r.envelope, 1e-18);
  EXPECT_LE(r.density.width(), 1e-9);

  const auto all = sieve_count(SSequence::named(Family::All), 100'000);
  EXPECT_EQ(all.count, 100'000u);
  EXPECT_LT(all.deviation, 1e-9);

  const auto small = sieve_count(parse_descriptor("finite:1"), 10);
  EXPECT_EQ(small.count, 7u);
  EXPECT_FALSE(small.envelope.has_value());
}

TEST(Enumeration, OeisFixtures) {
  const auto r = verify::oeis(ESND_FIXTURE_DIR);
  EXPECT_TRUE(r.passed) << r.counterexample;
  EXPECT_EQ(r.checked, 4u);
}

TEST(Enumeration, OeisFixtureMismatchIsReported) {
  const auto dir = std::filesystem::temp_directory_path() / "esnd_fixture_test";
  std::filesystem::create_directories(dir);
  for (const auto& f : verify::oeis_fixtures()) {
    std::ofstream out(dir / (f.id + ".txt"));
    out << "1\n2\n3\n" << (f.id == "A005117" ? "4\n" : "");
  }
  const auto r = verify::oeis(dir);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.counterexample.find("A005117"), std::string::npos);
  std::filesystem::remove_all(dir);
}

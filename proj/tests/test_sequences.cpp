#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "esnd/sequences.hpp"

using namespace esnd;

namespace {

std::vector<SSequence> builtin_families() {
  std::vector<SSequence> out;
  for (const auto& [f, name] : kFamilyNames) out.push_back(SSequence::named(f));
  return out;
}

// Random canonical finite or cofinite descriptor with terms <= max_term.
SSequence random_descriptor(std::mt19937_64& rng, unsigned max_term) {
  std::vector<std::uint64_t> terms{1};
  for (std::uint64_t t = 2; t <= max_term; ++t)
    if (rng() & 1) terms.push_back(t);
  if (rng() % 2 == 0) return SSequence::finite(terms);
  const std::uint64_t tail = terms.back() + 1 + rng() % 4;
  return SSequence::cofinite(terms, tail);
}

} // namespace

TEST(Sequences, ParsesEachGrammarForm) {
  auto f = parse_descriptor("finite:1,2,5");
  EXPECT_EQ(f.kind(), SequenceKind::ExplicitFinite);
  EXPECT_EQ(f.finite_part(), (std::vector<std::uint64_t>{1, 2, 5}));

  auto c = parse_descriptor("cofinite:1;tail=3");
  EXPECT_EQ(c.kind(), SequenceKind::CofiniteTail);
  EXPECT_EQ(c.finite_part(), (std::vector<std::uint64_t>{1}));
  EXPECT_EQ(c.tail_start(), 3u);
  EXPECT_FALSE(c.contains(2));
  EXPECT_TRUE(c.contains(3));
  EXPECT_TRUE(c.contains(1000));

  EXPECT_EQ(parse_descriptor("named:odd"), SSequence::named(Family::Odd));
  EXPECT_EQ(parse_descriptor("odd"), SSequence::named(Family::Odd));
  EXPECT_EQ(parse_descriptor("fibonacci").to_string(), "named:fibonacci");

  auto all = parse_descriptor("cofinite:;tail=1");
  EXPECT_TRUE(all.contains(1));
  EXPECT_TRUE(all.contains(2));
  EXPECT_EQ(all.to_string(), "cofinite:;tail=1");
}

TEST(Sequences, RejectsInvalidDescriptors) {
  EXPECT_THROW(parse_descriptor("finite:2,3"), ParseError);
  EXPECT_THROW(parse_descriptor("finite:"), ParseError);
  EXPECT_THROW(parse_descriptor("finite:1,3,2"), ParseError);
  EXPECT_THROW(parse_descriptor("finite:1,2,2"), ParseError);
  EXPECT_THROW(parse_descriptor("finite:0,1"), ParseError);
  EXPECT_THROW(parse_descriptor("finite:1,-2"), ParseError);
  EXPECT_THROW(parse_descriptor("finite:1,,2"), ParseError);
  EXPECT_THROW(parse_descriptor("cofinite:1"), ParseError);
  EXPECT_THROW(parse_descriptor("cofinite:1;tail=0"), ParseError);
  EXPECT_THROW(parse_descriptor("cofinite:;tail=2"), ParseError); // misses 1
  EXPECT_THROW(parse_descriptor("cofinite:1,5;tail=4"), ParseError);
  EXPECT_THROW(parse_descriptor("named:evens"), ParseError);
  EXPECT_THROW(parse_descriptor(""), ParseError);
}

TEST(Sequences, CofiniteNormalizesByLoweringTail) {
  auto s = parse_descriptor("cofinite:1,2,4;tail=5");
  EXPECT_EQ(s.to_string(), "cofinite:1,2;tail=4");
  EXPECT_EQ(parse_descriptor("cofinite:1,2;tail=3").to_string(), "cofinite:;tail=1");
  EXPECT_EQ(parse_descriptor("cofinite:1;tail=2"), SSequence::cofinite({}, 1));
}

TEST(Sequences, Contains) {
  EXPECT_TRUE(contains(parse_descriptor("finite:1,2"), 2));
  EXPECT_FALSE(contains(parse_descriptor("named:odd"), 4));
  EXPECT_FALSE(contains(parse_descriptor("cofinite:1,2;tail=4"), 3));

  const auto pow2 = SSequence::named(Family::Pow2);
  EXPECT_TRUE(pow2.contains(1));
  EXPECT_TRUE(pow2.contains(1024));
  EXPECT_FALSE(pow2.contains(12));

  const auto fib = SSequence::named(Family::Fibonacci);
  for (std::uint64_t n : {1, 2, 3, 5, 8, 13, 21}) EXPECT_TRUE(fib.contains(n)) << n;
  for (std::uint64_t n : {4, 6, 7, 9, 20}) EXPECT_FALSE(fib.contains(n)) << n;

  const auto sq = SSequence::named(Family::Squares);
  EXPECT_TRUE(sq.contains(1));
  EXPECT_TRUE(sq.contains(49));
  EXPECT_FALSE(sq.contains(50));

  const auto sf = SSequence::named(Family::Squarefree);
  for (std::uint64_t n : {1, 2, 3, 5, 6, 7, 10, 30}) EXPECT_TRUE(sf.contains(n)) << n;
  for (std::uint64_t n : {4, 8, 9, 12, 18, 25, 49}) EXPECT_FALSE(sf.contains(n)) << n;
}

TEST(Sequences, Delta) {
  EXPECT_EQ(delta(parse_descriptor("finite:1"), 2), -1);
  EXPECT_EQ(delta(parse_descriptor("finite:1,2"), 2), 0);
  EXPECT_EQ(delta(parse_descriptor("cofinite:1;tail=3"), 3), 1);
  EXPECT_THROW(delta(parse_descriptor("finite:1"), 1), DomainError);
}

TEST(Sequences, DeltaTelescopesForEveryFamily) {
  auto seqs = builtin_families();
  seqs.push_back(parse_descriptor("finite:1,2,5"));
  seqs.push_back(parse_descriptor("cofinite:1,3;tail=7"));
  for (const auto& s : seqs) {
    long sum = 0;
    for (std::uint64_t i = 2; i <= 10'000; ++i) {
      sum += s.delta(i);
      ASSERT_EQ(sum, static_cast<long>(s.contains(i)) - 1) << s.to_string() << " at " << i;
    }
  }
}

TEST(Sequences, FirstDivergence) {
  auto d = first_divergence(parse_descriptor("finite:1,2,4"), parse_descriptor("finite:1,2,3"));
  EXPECT_EQ(d.value, 3u);
  EXPECT_EQ(d.owner, Owner::B);

  d = first_divergence(parse_descriptor("finite:1"), parse_descriptor("finite:1,2"));
  EXPECT_EQ(d.value, 2u);
  EXPECT_EQ(d.owner, Owner::B);

  d = first_divergence(SSequence::named(Family::Odd), SSequence::named(Family::Squarefree));
  EXPECT_EQ(d.value, 2u);
  EXPECT_EQ(d.owner, Owner::B);

  d = first_divergence(parse_descriptor("finite:1,2"), parse_descriptor("cofinite:1,2;tail=9"));
  EXPECT_EQ(d.value, 9u);
  EXPECT_EQ(d.owner, Owner::B);
}

TEST(Sequences, FirstDivergenceReportsIdentity) {
  EXPECT_THROW(first_divergence(parse_descriptor("finite:1,3"), parse_descriptor("finite:1,3")), IdenticalSequences);
  EXPECT_THROW(first_divergence(SSequence::named(Family::All), parse_descriptor("cofinite:;tail=1"), 1000),
               IdenticalSequences);
  EXPECT_THROW(first_divergence(SSequence::named(Family::Odd), SSequence::named(Family::Odd)), IdenticalSequences);
}

TEST(Sequences, FirstDivergenceIsSymmetric) {
  std::mt19937_64 rng(7);
  auto pool = builtin_families();
  for (int i = 0; i < 60; ++i) pool.push_back(random_descriptor(rng, 10));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (pool[i] == pool[j]) continue;
      try {
        const auto ab = first_divergence(pool[i], pool[j], 10'000);
        const auto ba = first_divergence(pool[j], pool[i], 10'000);
        EXPECT_EQ(ab.value, ba.value);
        EXPECT_NE(ab.owner, ba.owner);
        EXPECT_GE(ab.value, 2u);
      } catch (const IdenticalSequences&) {
        EXPECT_THROW(first_divergence(pool[j], pool[i], 10'000), IdenticalSequences);
      }
    }
  }
}

TEST(Sequences, Partial) {
  EXPECT_EQ(partial(SSequence::named(Family::Odd), 3), parse_descriptor("finite:1,3,5"));
  EXPECT_EQ(partial(parse_descriptor("finite:1,2,5"), 2), parse_descriptor("finite:1,2"));
  EXPECT_THROW(partial(parse_descriptor("finite:1,2"), 5), DomainError);
  EXPECT_EQ(partial(SSequence::named(Family::Fibonacci), 6), parse_descriptor("finite:1,2,3,5,8,13"));
  EXPECT_EQ(partial(SSequence::named(Family::Pow2), 5), parse_descriptor("finite:1,2,4,8,16"));
  EXPECT_EQ(partial(SSequence::named(Family::Squares), 4), parse_descriptor("finite:1,4,9,16"));
  EXPECT_EQ(partial(SSequence::named(Family::Squarefree), 6), parse_descriptor("finite:1,2,3,5,6,7"));
  EXPECT_EQ(partial(parse_descriptor("cofinite:1,3;tail=6"), 4), parse_descriptor("finite:1,3,6,7"));
}

TEST(Sequences, NextMemberMatchesContains) {
  for (const auto& s : builtin_families()) {
    std::uint64_t n = 1;
    while (n < 100'000) {
      const auto next = *s.next_member(n);
      for (std::uint64_t m = n + 1; m < next; ++m) ASSERT_FALSE(s.contains(m)) << s.to_string();
      ASSERT_TRUE(s.contains(next)) << s.to_string();
      n = next;
    }
  }
}

TEST(Sequences, FirstMissing) {
  EXPECT_EQ(parse_descriptor("finite:1").first_missing(), 2u);
  EXPECT_EQ(parse_descriptor("finite:1,2,3,5").first_missing(), 4u);
  EXPECT_EQ(parse_descriptor("cofinite:1,2;tail=4").first_missing(), 3u);
  EXPECT_EQ(parse_descriptor("cofinite:;tail=1").first_missing(), std::nullopt);
  EXPECT_EQ(SSequence::named(Family::All).first_missing(), std::nullopt);
  EXPECT_EQ(SSequence::named(Family::Squarefree).first_missing(), 4u);
  EXPECT_EQ(SSequence::named(Family::Fibonacci).first_missing(), 4u);
}

TEST(Sequences, PrintParseRoundTrip) {
  std::mt19937_64 rng(11);
  auto pool = builtin_families();
  for (int i = 0; i < 500; ++i) pool.push_back(random_descriptor(rng, 16));
  for (const auto& s : pool) {
    const auto text = s.to_string();
    EXPECT_EQ(parse_descriptor(text), s) << text;
    EXPECT_EQ(parse_descriptor(text).to_string(), text);
  }
}

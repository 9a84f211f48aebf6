#pragma once

// Gaps in the set of all densities h(E(S)). For a finite S1 = {s(1),...,s(k)}
// with k >= 2, let S2 = {s(1),...,s(k-1)} u {s(k)+1, s(k)+2, ...}; then no
// density lies strictly between h(E(S2)) and h(E(S1)). Densities are ordered
// by the least integer on which two sequences disagree: the one containing it
// is larger.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esnd/density.hpp"
#include "esnd/error.hpp"
#include "esnd/exact.hpp"
#include "esnd/parallel.hpp"
#include "esnd/primes.hpp"
#include "esnd/sequences.hpp"

namespace esnd {

enum class Ordering { AGreater, BGreater };

/// Order of h(E(a)) and h(E(b)) decided from the first divergence alone.
inline Ordering compare(const SSequence& a, const SSequence& b, std::uint64_t cap = kDefaultScanCap) {
  return first_divergence(a, b, cap).owner == Owner::A ? Ordering::AGreater : Ordering::BGreater;
}

inline constexpr double kGapWidth = 1e-9;
inline constexpr unsigned kMaxCatalogTerm = 12;
inline constexpr double kDensityRangeLength = 1.0 - kSixOverPiSquared;
inline constexpr std::string_view kConjectureNote =
    "whether the gap lengths sum to 1 - 6/pi^2 (a measure-zero density set) is an open conjecture";

struct GapInterval {
  SSequence s1; // finite, right endpoint
  SSequence s2; // cofinite, left endpoint
  DensityBracket left;
  DensityBracket right;

  double length() const { return right.point - left.point; }
  double length_uncertainty() const { return left.width() + right.width(); }
  bool separated() const { return left.hi < right.lo; }
};

/// S1 with its last term replaced by the tail starting one above it.
inline SSequence gap_partner(const SSequence& s1) {
  if (!s1.is_finite()) throw DomainError("gap construction requires a finite sequence");
  if (s1.finite_part().size() < 2) throw DomainError("gap construction requires at least 2 terms (S = {1} has no gap)");
  auto terms = s1.finite_part();
  const auto last = terms.back();
  terms.pop_back();
  return SSequence::cofinite(std::move(terms), last + 1);
}

namespace detail {

// Evaluates with `eval`, falling back to the escalated prime bound if the
// bracket is wider than `target`.
inline DensityBracket bracket_within(const DensityEvaluator& eval, const SSequence& s, double target,
                                     unsigned threads) {
  auto b = eval(s, threads);
  if (b.width() > target && eval.prime_bound() < kEscalatedPrimeBound)
    b = DensityEvaluator(kEscalatedPrimeBound, eval.exponent_bound())(s, threads);
  b.target_width = target;
  b.meets_target = b.width() <= target;
  return b;
}

inline GapInterval make_gap(const SSequence& s1, const DensityEvaluator& eval, double target, unsigned threads) {
  GapInterval g{s1, gap_partner(s1), {}, {}};
  g.left = bracket_within(eval, g.s2, target, threads);
  g.right = bracket_within(eval, g.s1, target, threads);
  return g;
}

} // namespace detail

/// The gap whose right endpoint is h(E(s1)). Throws if the endpoint brackets
/// do not separate.
inline GapInterval gap_for(const SSequence& s1, const DensityEvaluator& eval, double target = kGapWidth) {
  auto g = detail::make_gap(s1, eval, target, 0);
  if (!g.separated())
    throw Error("gap endpoints for " + s1.to_string() + " are not separated at the evaluated precision");
  return g;
}

inline GapInterval gap_for(const SSequence& s1, double target = kGapWidth) {
  return gap_for(s1, DensityEvaluator(), target);
}

/// The gap for S1 = {1, 2}: (prod (1 - (p-1)/p^3), prod (1 - 1/p^3)). Also
/// checks the exact local factors of both endpoints for every p <= 100.
inline GapInterval berend_gap() {
  auto g = gap_for(SSequence::finite({1, 2}));
  for (auto p : primes_up_to(100)) {
    const BigInt cube = BigInt(p) * p * p;
    const Rational right_expected = 1 - Rational(BigInt(1), cube);
    const Rational left_expected = 1 - Rational(BigInt(p - 1), cube);
    if (local_factor_exact(g.s1, p) != right_expected || local_factor_exact(g.s2, p) != left_expected)
      throw Error("endpoint local factor mismatch at p = " + std::to_string(p));
  }
  return g;
}

enum class DisjointStatus { Disjoint, Violation, Inconclusive };

inline std::string_view to_string(DisjointStatus s) {
  switch (s) {
  case DisjointStatus::Disjoint: return "disjoint";
  case DisjointStatus::Violation: return "violation";
  case DisjointStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct DisjointReport {
  DisjointStatus status = DisjointStatus::Disjoint;
  std::optional<std::size_t> index; // first offending gap (pair index, index + 1)
  std::string detail;

  bool ok() const { return status == DisjointStatus::Disjoint; }
};

/// Checks gaps sorted by left endpoint: each gap must be a genuine interval
/// and end strictly before the next one starts. Overlapping brackets are
/// reported as inconclusive, never as a pass.
inline DisjointReport verify_disjoint(const std::vector<GapInterval>& gaps) {
  std::vector<std::size_t> order(gaps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gaps[a].left.point < gaps[b].left.point; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& g = gaps[order[k]];
    if (!g.separated())
      return {DisjointStatus::Inconclusive, k, "endpoint brackets of " + g.s1.to_string() + " overlap"};
    if (k + 1 == order.size()) break;
    const auto& next = gaps[order[k + 1]];
    if (g.right.hi < next.left.lo) continue;
    if (g.right.lo > next.left.hi)
      return {DisjointStatus::Violation, k,
              "gap for " + g.s1.to_string() + " overlaps gap for " + next.s1.to_string()};
    return {DisjointStatus::Inconclusive, k,
            "brackets cannot order " + g.s1.to_string() + " and " + next.s1.to_string()};
  }
  return {};
}

struct GapCatalog {
  unsigned max_term = 0;
  std::vector<GapInterval> gaps; // ascending by left endpoint
  double total_length = 0;
  DisjointReport disjoint;
};

inline DisjointReport verify_disjoint(const GapCatalog& catalog) { return verify_disjoint(catalog.gaps); }

/// All finite S1 in {1, ..., max_term} with 1 and at least one more term:
/// 2^(max_term - 1) - 1 gaps.
inline GapCatalog gap_catalog(unsigned max_term, const DensityEvaluator& eval, double target = kGapWidth) {
  if (max_term < 2 || max_term > kMaxCatalogTerm)
    throw DomainError("catalog bound must lie in [2, " + std::to_string(kMaxCatalogTerm) + "]");
  const std::size_t count = (std::size_t{1} << (max_term - 1)) - 1;
  std::vector<GapInterval> gaps;
  gaps.reserve(count);
  for (std::size_t mask = 1; mask <= count; ++mask) {
    std::vector<std::uint64_t> terms{1};
    for (unsigned bit = 0; bit + 2 <= max_term; ++bit)
      if (mask & (std::size_t{1} << bit)) terms.push_back(bit + 2);
    auto s1 = SSequence::finite(std::move(terms));
    gaps.push_back({s1, gap_partner(s1), {}, {}});
  }
  parallel_for(gaps.size(), [&](std::size_t i) { gaps[i] = detail::make_gap(gaps[i].s1, eval, target, 1); });
  std::stable_sort(gaps.begin(), gaps.end(),
                   [](const GapInterval& a, const GapInterval& b) { return a.left.point < b.left.point; });

  GapCatalog out;
  out.max_term = max_term;
  out.gaps = std::move(gaps);
  detail::CompensatedSum total;
  for (const auto& g : out.gaps) total.add(g.length());
  out.total_length = total.value();
  out.disjoint = verify_disjoint(out.gaps);
  return out;
}

inline GapCatalog gap_catalog(unsigned max_term, double target = kGapWidth) {
  return gap_catalog(max_term, DensityEvaluator(), target);
}

struct GapMeasure {
  unsigned max_term = 0;
  std::size_t gap_count = 0;
  double total_length = 0;
  double lower_conf = 0; // sum of right.lo - left.hi
  double upper_conf = 0; // sum of right.hi - left.lo
  double target = kDensityRangeLength;
};

inline GapMeasure gap_measure(const GapCatalog& catalog) {
  GapMeasure m;
  m.max_term = catalog.max_term;
  m.gap_count = catalog.gaps.size();
  m.total_length = catalog.total_length;
  detail::CompensatedSum lo, hi;
  for (const auto& g : catalog.gaps) {
    lo.add(std::max(0.0, g.right.lo - g.left.hi));
    hi.add(g.right.hi - g.left.lo);
  }
  m.lower_conf = lo.value();
  m.upper_conf = hi.value();
  return m;
}

/// Total length of the catalog(max_term) gaps, reported against 1 - 6/pi^2.
inline GapMeasure gap_measure(unsigned max_term, const DensityEvaluator& eval = DensityEvaluator()) {
  return gap_measure(gap_catalog(max_term, eval));
}

} // namespace esnd

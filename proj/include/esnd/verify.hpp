#pragma once

// Numerical verification suites: comparator against bracket order, gap
// disjointness, convergence of partial sequences, and OEIS prefixes.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "esnd/density.hpp"
#include "esnd/enumeration.hpp"
#include "esnd/gaps.hpp"
#include "esnd/io.hpp"
#include "esnd/parallel.hpp"
#include "esnd/sequences.hpp"

namespace esnd::verify {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t checked = 0;
  std::string counterexample; // first violation, empty when passed
  std::vector<std::string> notes;

  void fail(std::string what) {
    if (passed) counterexample = std::move(what);
    passed = false;
  }
};

/// Every finite sequence {1} u T with T a subset of {2, ..., max_term}.
inline std::vector<SSequence> finite_sequences_up_to(unsigned max_term) {
  std::vector<SSequence> out;
  const std::size_t n = std::size_t{1} << (max_term - 1);
  for (std::size_t mask = 0; mask < n; ++mask) {
    std::vector<std::uint64_t> terms{1};
    for (unsigned bit = 0; bit + 2 <= max_term; ++bit)
      if (mask & (std::size_t{1} << bit)) terms.push_back(bit + 2);
    out.push_back(SSequence::finite(std::move(terms)));
  }
  return out;
}

/// Every canonical cofinite sequence with tail start <= max_tail (including
/// the full sequence, tail = 1).
inline std::vector<SSequence> cofinite_sequences_up_to(unsigned max_tail) {
  std::vector<SSequence> out{SSequence::cofinite({}, 1)};
  for (unsigned tail = 3; tail <= max_tail; ++tail) {
    // finite part: 1 plus any subset of {2, ..., tail - 2}
    const std::size_t n = std::size_t{1} << (tail - 3);
    for (std::size_t mask = 0; mask < n; ++mask) {
      std::vector<std::uint64_t> terms{1};
      for (unsigned bit = 0; bit + 2 <= tail - 2; ++bit)
        if (mask & (std::size_t{1} << bit)) terms.push_back(bit + 2);
      out.push_back(SSequence::cofinite(std::move(terms), tail));
    }
  }
  return out;
}

inline std::vector<DensityBracket> evaluate_all(const std::vector<SSequence>& seqs, const DensityEvaluator& eval,
                                                double width) {
  std::vector<DensityBracket> out(seqs.size());
  parallel_for(seqs.size(), [&](std::size_t i) { out[i] = detail::bracket_within(eval, seqs[i], width, 1); });
  return out;
}

/// The first-divergence comparator agrees with strictly separated density
/// brackets on every pair of distinct finite sequences with terms <= max_term.
inline SuiteResult comparator_consistency(unsigned max_term = 6, double width = 1e-10,
                                          const DensityEvaluator& eval = DensityEvaluator()) {
  SuiteResult r;
  r.name = "lemma4";
  const auto seqs = finite_sequences_up_to(max_term);
  const auto dens = evaluate_all(seqs, eval, width);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (dens[i].width() > width)
      r.fail(seqs[i].to_string() + ": bracket width " + io::format_double(dens[i].width()) + " above target");
  }
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    for (std::size_t j = i + 1; j < seqs.size(); ++j) {
      ++r.checked;
      const bool a_greater = compare(seqs[i], seqs[j]) == Ordering::AGreater;
      const auto& hi = a_greater ? dens[i] : dens[j];
      const auto& lo = a_greater ? dens[j] : dens[i];
      if (!(lo.hi < hi.lo))
        r.fail("comparator says " + hi.sequence + " > " + lo.sequence + " but brackets [" +
               io::format_double(hi.lo) + ", " + io::format_double(hi.hi) + "] and [" + io::format_double(lo.lo) +
               ", " + io::format_double(lo.hi) + "] disagree");
    }
  }
  return r;
}

/// catalog(max_term) is pairwise disjoint with no inconclusive pairs.
inline SuiteResult disjoint(unsigned max_term = 6, double width = kGapWidth,
                            const DensityEvaluator& eval = DensityEvaluator()) {
  SuiteResult r;
  r.name = "disjoint";
  const auto catalog = gap_catalog(max_term, eval, width);
  r.checked = catalog.gaps.size();
  for (const auto& g : catalog.gaps) {
    if (g.left.width() > width || g.right.width() > width)
      r.fail("gap for " + g.s1.to_string() + ": endpoint bracket wider than target");
  }
  if (!catalog.disjoint.ok()) r.fail(std::string(to_string(catalog.disjoint.status)) + ": " + catalog.disjoint.detail);
  r.notes.push_back(std::to_string(catalog.gaps.size()) + " gaps, total length " +
                    io::format_double(catalog.total_length));
  return r;
}

/// No finite or cofinite density with terms / tail start <= max_term lies
/// strictly inside a catalog(catalog_term) gap.
inline SuiteResult gap_avoidance(unsigned max_term = 8, unsigned catalog_term = 6, double width = kGapWidth,
                                 const DensityEvaluator& eval = DensityEvaluator()) {
  SuiteResult r;
  r.name = "avoidance";
  const auto catalog = gap_catalog(catalog_term, eval, width);
  auto seqs = finite_sequences_up_to(max_term);
  for (auto& s : cofinite_sequences_up_to(max_term)) seqs.push_back(std::move(s));
  const auto dens = evaluate_all(seqs, eval, width);
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    for (const auto& g : catalog.gaps) {
      ++r.checked;
      const double eps = dens[i].width() + g.left.width() + g.right.width();
      const bool below = dens[i].hi <= g.left.hi + eps;
      const bool above = dens[i].lo >= g.right.lo - eps;
      if (!below && !above)
        r.fail(seqs[i].to_string() + " falls inside the gap for " + g.s1.to_string());
    }
  }
  r.notes.push_back(std::to_string(seqs.size()) + " sequences against " + std::to_string(catalog.gaps.size()) +
                    " gaps");
  return r;
}

struct ConvergenceRow {
  std::size_t n = 0;
  double distance = 0; // |h(S_n) - h(S)| on bracket midpoints
  DensityBracket partial;
};

/// Partial sequences S_n of `s` approach it: distances strictly decrease for
/// n in [2, decreasing_until] and fall below `threshold` at n = final_n.
/// Also checks h(S_m) < h(S) < h(S_{m-1} u [s(m), inf)) for each m.
inline SuiteResult convergence(const SSequence& s = SSequence::named(Family::Odd), std::size_t decreasing_until = 10,
                               std::size_t final_n = 12, double threshold = 1e-6, double width = kGapWidth,
                               std::vector<ConvergenceRow>* rows = nullptr) {
  SuiteResult r;
  r.name = "convergence";
  DensityEvaluator eval;
  const auto full = detail::bracket_within(eval, s, width, 0);
  if (full.width() > width) r.fail(full.sequence + ": bracket wider than target");
  std::vector<ConvergenceRow> table;
  for (std::size_t n = 2; n <= final_n; ++n) {
    const auto sn = partial(s, n);
    auto b = detail::bracket_within(eval, sn, width, 0);
    if (b.width() > width) r.fail(b.sequence + ": bracket wider than target");
    table.push_back({n, std::abs(b.point - full.point), b});

    // Lower and upper approximants built from the first n terms.
    ++r.checked;
    if (sn != s && !(b.hi < full.lo)) r.fail(b.sequence + " is not below " + full.sequence);
    auto head = sn.finite_part();
    const auto last = head.back();
    head.pop_back();
    const auto upper = SSequence::cofinite(std::move(head), last);
    if (upper != s) {
      const auto ub = detail::bracket_within(eval, upper, width, 0);
      if (!(full.hi < ub.lo)) r.fail(full.sequence + " is not below " + ub.sequence);
    }
  }
  for (std::size_t k = 1; k < table.size(); ++k) {
    if (table[k].n > decreasing_until) break;
    ++r.checked;
    if (!(table[k].distance < table[k - 1].distance))
      r.fail("distance at n=" + std::to_string(table[k].n) + " (" + io::format_double(table[k].distance) +
             ") does not decrease from n=" + std::to_string(table[k - 1].n));
  }
  ++r.checked;
  if (!(table.back().distance < threshold))
    r.fail("distance at n=" + std::to_string(final_n) + " is " + io::format_double(table.back().distance));
  r.notes.push_back("distance at n=" + std::to_string(final_n) + ": " + io::format_double(table.back().distance));
  if (rows) *rows = std::move(table);
  return r;
}

struct OeisFixture {
  std::string id;
  SSequence sequence;
};

inline std::vector<OeisFixture> oeis_fixtures() {
  return {
      {"A005117", SSequence::finite({1})},
      {"A004709", SSequence::finite({1, 2})},
      {"A268335", SSequence::named(Family::Odd)},
      {"A138302", SSequence::named(Family::Pow2)},
  };
}

/// enumerate() reproduces each stored fixture prefix exactly.
inline SuiteResult oeis(const std::filesystem::path& fixture_dir) {
  SuiteResult r;
  r.name = "oeis";
  for (const auto& f : oeis_fixtures()) {
    const auto path = fixture_dir / (f.id + ".txt");
    std::ifstream in(path);
    if (!in) {
      r.fail("cannot open fixture " + path.string());
      continue;
    }
    const auto expected = io::read_integer_list(in);
    if (expected.empty()) {
      r.fail("fixture " + path.string() + " is empty");
      continue;
    }
    auto got = enumerate(f.sequence, expected.back());
    got.resize(std::min(got.size(), expected.size()));
    ++r.checked;
    if (got != expected) {
      std::size_t i = 0;
      while (i < got.size() && got[i] == expected[i]) ++i;
      r.fail(f.id + ": term " + std::to_string(i + 1) + " differs (expected " +
             (i < expected.size() ? std::to_string(expected[i]) : "none") + ", got " +
             (i < got.size() ? std::to_string(got[i]) : "none") + ")");
    }
  }
  return r;
}

} // namespace esnd::verify

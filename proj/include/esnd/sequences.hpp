#pragma once

// Finite descriptions of exponent sequences: increasing sequences of positive
// integers that begin with 1. A sequence S determines the set E(S) of integers
// whose prime exponents all lie in S.

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "esnd/error.hpp"

namespace esnd {

enum class SequenceKind { ExplicitFinite, CofiniteTail, Named };

enum class Family { All, Odd, Pow2, Squares, Fibonacci, Squarefree };

inline constexpr std::array<std::pair<Family, std::string_view>, 6> kFamilyNames{{
    {Family::All, "all"},
    {Family::Odd, "odd"},
    {Family::Pow2, "pow2"},
    {Family::Squares, "squares"},
    {Family::Fibonacci, "fibonacci"},
    {Family::Squarefree, "squarefree"},
}};

inline std::string_view family_name(Family f) {
  for (const auto& [fam, name] : kFamilyNames)
    if (fam == f) return name;
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
  for (const auto& [fam, n] : kFamilyNames)
    if (n == name) return fam;
  return std::nullopt;
}

namespace detail {

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Distinct Fibonacci numbers 1, 2, 3, 5, ... that fit in 64 bits.
inline const std::vector<std::uint64_t>& fibonacci_table() {
  static const std::vector<std::uint64_t> table = [] {
    std::vector<std::uint64_t> t{1, 2};
    while (t.back() <= UINT64_MAX - t[t.size() - 2]) t.push_back(t.back() + t[t.size() - 2]);
    return t;
  }();
  return table;
}

inline bool is_squarefree(std::uint64_t n) {
  if (n % 4 == 0) return false;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % (d * d) == 0) return false;
  return true;
}

inline bool family_contains(Family f, std::uint64_t n) {
  switch (f) {
  case Family::All: return true;
  case Family::Odd: return (n & 1U) == 1U;
  case Family::Pow2: return std::has_single_bit(n);
  case Family::Squares: {
    const auto r = isqrt(n);
    return r * r == n;
  }
  case Family::Fibonacci: {
    const auto& t = fibonacci_table();
    return std::binary_search(t.begin(), t.end(), n);
  }
  case Family::Squarefree: return is_squarefree(n);
  }
  return false;
}

inline std::uint64_t family_next(Family f, std::uint64_t n) {
  switch (f) {
  case Family::All: return n + 1;
  case Family::Odd: return (n & 1U) ? n + 2 : n + 1;
  case Family::Pow2: return std::bit_ceil(n + 1);
  case Family::Squares: {
    const auto r = isqrt(n);
    return (r + 1) * (r + 1);
  }
  case Family::Fibonacci: {
    const auto& t = fibonacci_table();
    return *std::upper_bound(t.begin(), t.end(), n);
  }
  case Family::Squarefree: {
    auto m = n + 1;
    while (!is_squarefree(m)) ++m;
    return m;
  }
  }
  return n + 1;
}

inline std::uint64_t parse_term(std::string_view text) {
  std::uint64_t value = 0;
  if (text.empty()) throw ParseError("empty term in sequence descriptor");
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end)
    throw ParseError("invalid term '" + std::string(text) + "' in sequence descriptor");
  if (value == 0) throw ParseError("terms must be positive integers");
  return value;
}

inline std::vector<std::uint64_t> parse_term_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_term(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline void require_increasing(const std::vector<std::uint64_t>& terms) {
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (terms[i] <= terms[i - 1])
      throw ParseError("terms must be strictly increasing without duplicates");
}

} // namespace detail

/// A finite description of an element of the sequence space: an explicit
/// finite set, a finite set plus every integer from some point on, or one of
/// the built-in infinite families. Every instance contains 1 and is stored in
/// canonical form, so descriptor equality is set equality within a kind.
class SSequence {
public:
  static SSequence finite(std::vector<std::uint64_t> terms) {
    detail::require_increasing(terms);
    if (terms.empty() || terms.front() != 1) throw ParseError("sequence must contain 1");
    SSequence s;
    s.kind_ = SequenceKind::ExplicitFinite;
    s.terms_ = std::move(terms);
    return s;
  }

  // Terms strictly below `tail`, plus every integer >= tail.
  static SSequence cofinite(std::vector<std::uint64_t> terms, std::uint64_t tail) {
    detail::require_increasing(terms);
    if (tail == 0) throw ParseError("tail start must be a positive integer");
    if (!terms.empty() && terms.back() >= tail)
      throw ParseError("finite part must lie below the tail start");
    while (!terms.empty() && terms.back() == tail - 1) {
      terms.pop_back();
      --tail;
    }
    const bool has_one = tail == 1 || (!terms.empty() && terms.front() == 1);
    if (!has_one) throw ParseError("sequence must contain 1");
    SSequence s;
    s.kind_ = SequenceKind::CofiniteTail;
    s.terms_ = std::move(terms);
    s.tail_ = tail;
    return s;
  }

  static SSequence named(Family f) {
    SSequence s;
    s.kind_ = SequenceKind::Named;
    s.family_ = f;
    return s;
  }

  SequenceKind kind() const { return kind_; }
  const std::vector<std::uint64_t>& finite_part() const { return terms_; }
  std::uint64_t tail_start() const { return tail_; }
  Family family() const { return family_; }

  bool is_finite() const { return kind_ == SequenceKind::ExplicitFinite; }
  bool has_closed_form() const { return kind_ != SequenceKind::Named; }

  // The characteristic function u(n).
  bool contains(std::uint64_t n) const {
    if (n == 0) return false;
    switch (kind_) {
    case SequenceKind::ExplicitFinite:
      return std::binary_search(terms_.begin(), terms_.end(), n);
    case SequenceKind::CofiniteTail:
      return n >= tail_ || std::binary_search(terms_.begin(), terms_.end(), n);
    case SequenceKind::Named: return detail::family_contains(family_, n);
    }
    return false;
  }

  // u(i) - u(i-1), the numerator of the i-th term of a local Euler factor.
  int delta(std::uint64_t i) const {
    return static_cast<int>(contains(i)) - static_cast<int>(contains(i - 1));
  }

  // Smallest member strictly greater than n, if any.
  std::optional<std::uint64_t> next_member(std::uint64_t n) const {
    switch (kind_) {
    case SequenceKind::ExplicitFinite: {
      auto it = std::upper_bound(terms_.begin(), terms_.end(), n);
      if (it == terms_.end()) return std::nullopt;
      return *it;
    }
    case SequenceKind::CofiniteTail: {
      auto it = std::upper_bound(terms_.begin(), terms_.end(), n);
      if (it != terms_.end()) return *it;
      return std::max(n + 1, tail_);
    }
    case SequenceKind::Named: return detail::family_next(family_, n);
    }
    return std::nullopt;
  }

  // Smallest integer >= 2 that is not a member, if any.
  std::optional<std::uint64_t> first_missing() const {
    switch (kind_) {
    case SequenceKind::ExplicitFinite: {
      std::uint64_t expect = 1;
      for (auto t : terms_) {
        if (t != expect) break;
        ++expect;
      }
      return expect;
    }
    case SequenceKind::CofiniteTail: {
      if (tail_ == 1) return std::nullopt;
      std::uint64_t expect = 1;
      for (auto t : terms_) {
        if (t != expect) break;
        ++expect;
      }
      return expect; // canonical form guarantees expect < tail
    }
    case SequenceKind::Named: {
      if (family_ == Family::All) return std::nullopt;
      std::uint64_t n = 2;
      while (detail::family_contains(family_, n)) ++n;
      return n;
    }
    }
    return std::nullopt;
  }

  // Membership is constant for every n >= stable_from(); none for named
  // families, which are treated as undecidable beyond a scan cap.
  std::optional<std::uint64_t> stable_from() const {
    switch (kind_) {
    case SequenceKind::ExplicitFinite: return terms_.back() + 1;
    case SequenceKind::CofiniteTail: return tail_;
    case SequenceKind::Named: return std::nullopt;
    }
    return std::nullopt;
  }

  std::string to_string() const {
    std::string out;
    auto append_terms = [&] {
      for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(terms_[i]);
      }
    };
    switch (kind_) {
    case SequenceKind::ExplicitFinite:
      out = "finite:";
      append_terms();
      break;
    case SequenceKind::CofiniteTail:
      out = "cofinite:";
      append_terms();
      out += ";tail=" + std::to_string(tail_);
      break;
    case SequenceKind::Named:
      out = "named:";
      out += family_name(family_);
      break;
    }
    return out;
  }

  friend bool operator==(const SSequence&, const SSequence&) = default;

private:
  SSequence() = default;

  SequenceKind kind_ = SequenceKind::Named;
  std::vector<std::uint64_t> terms_;
  std::uint64_t tail_ = 0;
  Family family_ = Family::All;
};

/// Parses `finite:1,2,5`, `cofinite:1,2;tail=4`, `named:odd` or a bare family
/// name. Throws ParseError on anything else.
inline SSequence parse_descriptor(std::string_view text) {
  constexpr std::string_view kFinite = "finite:";
  constexpr std::string_view kCofinite = "cofinite:";
  constexpr std::string_view kNamed = "named:";
  constexpr std::string_view kTail = ";tail=";

  if (text.starts_with(kFinite)) {
    return SSequence::finite(detail::parse_term_list(text.substr(kFinite.size())));
  }
  if (text.starts_with(kCofinite)) {
    auto body = text.substr(kCofinite.size());
    const auto pos = body.find(kTail);
    if (pos == std::string_view::npos) throw ParseError("cofinite descriptor requires ';tail=<m>'");
    return SSequence::cofinite(detail::parse_term_list(body.substr(0, pos)),
                               detail::parse_term(body.substr(pos + kTail.size())));
  }
  auto name = text.starts_with(kNamed) ? text.substr(kNamed.size()) : text;
  if (auto f = family_from_name(name)) return SSequence::named(*f);
  throw ParseError("unrecognized sequence descriptor '" + std::string(text) + "'");
}

inline bool contains(const SSequence& s, std::uint64_t n) { return s.contains(n); }

inline int delta(const SSequence& s, std::uint64_t i) {
  if (i < 2) throw DomainError("delta requires i >= 2");
  return s.delta(i);
}

enum class Owner { A, B };

struct Divergence {
  std::uint64_t value = 0; // s*, the least integer in exactly one sequence
  Owner owner = Owner::A;
};

inline constexpr std::uint64_t kDefaultScanCap = 1'000'000;

/// Least integer belonging to exactly one of `a`, `b`. Infinite descriptors
/// are compared by scanning up to `cap`.
inline Divergence first_divergence(const SSequence& a, const SSequence& b,
                                   std::uint64_t cap = kDefaultScanCap) {
  if (a == b) throw IdenticalSequences("sequences identical");
  const auto sa = a.stable_from();
  const auto sb = b.stable_from();
  std::optional<std::uint64_t> decided;
  if (sa && sb) decided = std::max(*sa, *sb);
  for (std::uint64_t i = 2;; ++i) {
    const bool in_a = a.contains(i);
    if (in_a != b.contains(i)) return {i, in_a ? Owner::A : Owner::B};
    if (decided && i >= *decided) throw IdenticalSequences("sequences identical");
    if (!decided && i >= cap)
      throw IdenticalSequences("sequences identical up to scan cap " + std::to_string(cap));
  }
}

/// The first n terms as an explicit finite sequence.
inline SSequence partial(const SSequence& s, std::size_t n) {
  if (n == 0) throw DomainError("partial requires n >= 1");
  if (s.is_finite() && n > s.finite_part().size())
    throw DomainError("sequence has only " + std::to_string(s.finite_part().size()) +
                      " terms, requested " + std::to_string(n));
  std::vector<std::uint64_t> terms{1};
  while (terms.size() < n) terms.push_back(*s.next_member(terms.back()));
  return SSequence::finite(std::move(terms));
}

} // namespace esnd

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esnd/density.hpp"
#include "esnd/error.hpp"
#include "esnd/parallel.hpp"
#include "esnd/primes.hpp"
#include "esnd/sequences.hpp"

namespace esnd {

// c = 4 sqrt(2.4 / log 2) with natural logarithms.
inline constexpr double kEnvelopeConstant = 7.443083;

/// True iff every exponent in the factorization of n lies in s. n = 1 has no
/// exponents and is a member of every E(S).
inline bool is_member(std::uint64_t n, const SSequence& s, const PrimeTable& table) {
  for (const auto& pp : factor_exponents(n, table))
    if (!s.contains(pp.exponent)) return false;
  return true;
}

struct SieveConfig {
  std::uint64_t memory_budget = 1ull << 31; // largest x accepted
  std::uint64_t segment = 1ull << 24;
  unsigned threads = 0; // 0: thread_count()
};

namespace detail {

// allowed[e] = u(e) for every exponent a 64-bit integer can carry.
inline std::vector<char> exponent_mask(const SSequence& s) {
  std::vector<char> allowed(65);
  for (unsigned e = 1; e <= 64; ++e) allowed[e] = s.contains(e) ? 1 : 0;
  return allowed;
}

// Runs the exclusion sieve over [1, x] segment by segment, calling
// visit(segment_index, lo, marks) with marks[i] != 0 iff lo + i is a member.
// Only multiples of p^2 are touched: exponent 1 is always allowed.
template <typename Visit>
void exclusion_sieve(const SSequence& s, std::uint64_t x, const SieveConfig& cfg, Visit&& visit) {
  if (x < 1) throw DomainError("limit must be at least 1");
  if (x > cfg.memory_budget)
    throw BudgetError("limit " + std::to_string(x) + " exceeds memory budget " +
                      std::to_string(cfg.memory_budget));
  const auto allowed = exponent_mask(s);
  const std::uint64_t root = isqrt(x);
  const auto primes = root >= 2 ? primes_up_to(root) : std::vector<std::uint32_t>{};
  const std::uint64_t seg = std::max<std::uint64_t>(1, cfg.segment);
  const std::size_t segments = static_cast<std::size_t>((x + seg - 1) / seg);

  parallel_for(
      segments,
      [&](std::size_t k) {
        const std::uint64_t lo = 1 + k * seg;
        const std::uint64_t hi = std::min(x, lo + seg - 1);
        std::vector<char> marks(hi - lo + 1, 1);
        for (std::uint64_t p : primes) {
          const std::uint64_t sq = p * p;
          if (sq > hi) break;
          for (std::uint64_t m = (lo + sq - 1) / sq; m * sq <= hi; ++m) {
            unsigned e = 2;
            for (std::uint64_t r = m; r % p == 0; r /= p) ++e;
            if (!allowed[e]) marks[m * sq - lo] = 0;
          }
        }
        visit(k, lo, marks);
      },
      cfg.threads == 0 ? thread_count() : cfg.threads);
}

} // namespace detail

/// |E(S) n [1, x]| via the exclusion sieve.
inline std::uint64_t sieve_member_count(const SSequence& s, std::uint64_t x, const SieveConfig& cfg = {}) {
  const std::uint64_t seg = std::max<std::uint64_t>(1, cfg.segment);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>((x + seg - 1) / seg));
  detail::exclusion_sieve(s, x, cfg, [&](std::size_t k, std::uint64_t, const std::vector<char>& marks) {
    std::uint64_t c = 0;
    for (char m : marks) c += m != 0;
    counts[k] = c;
  });
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  return total;
}

/// Members of E(S) in [1, x], ascending.
inline std::vector<std::uint64_t> enumerate(const SSequence& s, std::uint64_t x, const SieveConfig& cfg = {}) {
  const std::uint64_t seg = std::max<std::uint64_t>(1, cfg.segment);
  std::vector<std::vector<std::uint64_t>> parts(static_cast<std::size_t>((x + seg - 1) / seg));
  detail::exclusion_sieve(s, x, cfg, [&](std::size_t k, std::uint64_t lo, const std::vector<char>& marks) {
    auto& out = parts[k];
    for (std::size_t i = 0; i < marks.size(); ++i)
      if (marks[i]) out.push_back(lo + i);
  });
  std::vector<std::uint64_t> out;
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

/// sqrt(x) log x exp(c sqrt(log x) / log log x), natural logs. Requires
/// x >= 16 so that log log x > 1.
inline double envelope(std::uint64_t x) {
  if (x < 16) throw DomainError("envelope requires x >= 16");
  const double lx = std::log(static_cast<double>(x));
  return std::sqrt(static_cast<double>(x)) * lx * std::exp(kEnvelopeConstant * std::sqrt(lx) / std::log(lx));
}

struct CountReport {
  std::string sequence;
  std::uint64_t x = 0;
  std::uint64_t count = 0;
  double predicted = 0;             // density midpoint times x
  double deviation = 0;             // |count - predicted|
  double deviation_uncertainty = 0; // x times the larger side of the bracket around point
  std::optional<double> envelope;   // absent for x < 16
  std::optional<double> ratio;      // deviation / envelope
  DensityBracket density;
};

inline constexpr double kCountDensityWidth = 1e-9;

/// Counts E(S) n [1, x] and compares the count with h x and the error envelope.
inline CountReport sieve_count(const SSequence& s, std::uint64_t x, const SieveConfig& cfg = {},
                               DensityOptions density_options = {.target_width = kCountDensityWidth}) {
  CountReport r;
  r.sequence = s.to_string();
  r.x = x;
  r.count = sieve_member_count(s, x, cfg);
  r.density = density(s, density_options);
  const double xd = static_cast<double>(x);
  r.predicted = r.density.point * xd;
  r.deviation = std::abs(static_cast<double>(r.count) - r.predicted);
  r.deviation_uncertainty = std::max(r.density.point - r.density.lo, r.density.hi - r.density.point) * xd;
  if (x >= 16) {
    r.envelope = envelope(x);
    r.ratio = r.deviation / *r.envelope;
  }
  return r;
}

} // namespace esnd

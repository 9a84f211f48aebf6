#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "esnd/error.hpp"
#include "esnd/sequences.hpp"

namespace esnd {

inline constexpr std::uint64_t kPlainSieveLimit = 10'000'000;
inline constexpr std::uint64_t kDefaultTableLimit = 10'000'000;
inline constexpr std::uint64_t kMaxPrimeBound = 0xFFFFFFFFull;

namespace detail {

inline std::vector<std::uint32_t> plain_sieve(std::uint32_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

// Segmented sieve over [2, limit] with segments of `segment` integers.
template <typename Fn>
void segmented_sieve(std::uint64_t limit, Fn&& emit, std::uint64_t segment = 1u << 20) {
  const auto root = static_cast<std::uint32_t>(isqrt(limit));
  const auto base = plain_sieve(root);
  std::vector<char> mark(segment);
  for (std::uint64_t lo = 2; lo <= limit; lo += segment) {
    const std::uint64_t hi = std::min(limit, lo + segment - 1);
    std::fill(mark.begin(), mark.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 0);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) mark[j - lo] = 1;
    }
    for (std::uint64_t n = lo; n <= hi; ++n)
      if (!mark[n - lo]) emit(static_cast<std::uint32_t>(n));
  }
}

} // namespace detail

/// Primes in [2, bound], ascending. Uses a segmented sieve above 10^7.
inline std::vector<std::uint32_t> primes_up_to(std::uint64_t bound) {
  if (bound < 2) throw DomainError("prime bound must be at least 2");
  if (bound > kMaxPrimeBound) throw DomainError("prime bound exceeds 2^32 - 1");
  if (bound <= kPlainSieveLimit) return detail::plain_sieve(static_cast<std::uint32_t>(bound));
  std::vector<std::uint32_t> out;
  detail::segmented_sieve(bound, [&](std::uint32_t p) { out.push_back(p); });
  return out;
}

/// Shared immutable prime list; repeated requests for the same bound reuse it.
inline std::shared_ptr<const std::vector<std::uint32_t>> cached_primes(std::uint64_t bound) {
  static std::mutex mu;
  static std::map<std::uint64_t, std::shared_ptr<const std::vector<std::uint32_t>>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[bound];
  if (!slot) slot = std::make_shared<const std::vector<std::uint32_t>>(primes_up_to(bound));
  return slot;
}

/// Smallest-prime-factor table over [0, limit].
class PrimeTable {
public:
  explicit PrimeTable(std::uint64_t limit = kDefaultTableLimit) : limit_(limit) {
    if (limit < 2) throw DomainError("prime table limit must be at least 2");
    if (limit > kMaxPrimeBound) throw DomainError("prime table limit exceeds 2^32 - 1");
    spf_.assign(limit + 1, 0);
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (spf_[i] != 0) continue;
      spf_[i] = static_cast<std::uint32_t>(i);
      for (std::uint64_t j = i * i; j <= limit; j += i)
        if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
    }
  }

  std::uint64_t limit() const { return limit_; }

  std::uint32_t spf(std::uint64_t n) const {
    if (n < 2 || n > limit_) throw DomainError("spf argument " + std::to_string(n) + " out of table range");
    return spf_[n];
  }

  bool is_prime(std::uint64_t n) const { return n >= 2 && n <= limit_ && spf_[n] == n; }

private:
  std::uint64_t limit_;
  std::vector<std::uint32_t> spf_;
};

struct PrimePower {
  std::uint64_t prime = 0;
  unsigned exponent = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime power factorization of n, primes ascending. n = 1 gives an empty list.
inline std::vector<PrimePower> factor_exponents(std::uint64_t n, const PrimeTable& table) {
  if (n < 1 || n > table.limit())
    throw DomainError("cannot factor " + std::to_string(n) + ": outside table range [1, " +
                      std::to_string(table.limit()) + "]");
  std::vector<PrimePower> out;
  while (n > 1) {
    const std::uint64_t p = table.spf(n);
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

} // namespace esnd

#pragma once

// Natural density of E(S) as an Euler product over primes, returned as a
// certified enclosure [lo, hi].
//
// Every local factor f_p = 1 + sum_{i>=2} (u(i) - u(i-1)) p^-i has
// alternating nonzero numerators starting at -1, so
//   -p^-a1 <= f_p - 1 <= -p^-a1 + p^-a2
// where a1 is the least non-member >= 2 and a2 the next member after it.
// The product over p <= P is accumulated as a compensated sum of log1p terms;
// the primes above P are enclosed from that inequality together with the
// prime zeta tails sum_{p>P} p^-2 and p^-3.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "esnd/error.hpp"
#include "esnd/parallel.hpp"
#include "esnd/primes.hpp"
#include "esnd/sequences.hpp"

namespace esnd {

inline constexpr double kSixOverPiSquared = 0.60792710185402662866;
inline constexpr std::uint64_t kDefaultPrimeBound = 1'000'000;
inline constexpr std::uint64_t kEscalatedPrimeBound = 10'000'000;
inline constexpr unsigned kDefaultExponentBound = 64;
inline constexpr double kDefaultTargetWidth = 1e-8;

// sum_p p^-2 and sum_p p^-3 over all primes.
inline constexpr double kPrimeZeta2 = 0.45224742004106549850654336483224793417;
inline constexpr double kPrimeZeta3 = 0.17476263929944353642311331466570670098;

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

struct RealBracket {
  double lo = 0;
  double point = 0;
  double hi = 0;
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

namespace detail {

// Accumulator with Neumaier's compensation; fixed operation order.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    abs_ += std::abs(x);
    ++count_;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
    abs_ += other.abs_;
    count_ += other.count_;
  }
  double value() const { return sum_ + comp_; }
  // Bound on |value() - exact sum of the added terms|.
  double error_bound() const {
    const double u = kUnitRoundoff;
    return 2 * u * std::abs(value()) + 4 * static_cast<double>(count_) * u * u * abs_;
  }

private:
  double sum_ = 0;
  double comp_ = 0;
  double abs_ = 0;
  std::size_t count_ = 0;
};

// Rounding slack for values computed with at most `ops` roundings.
inline double gamma(double ops) {
  const double u = kUnitRoundoff;
  return ops * u / (1 - ops * u);
}

// One nonzero term of f_p - 1: coeff * p^-exponent, where a closed-form term
// carries the (1 - 1/p) factor.
struct ExcessTerm {
  std::uint64_t exponent = 0;
  int sign = 0;
  bool times_one_minus_inv_p = false;
};

// Value of f_p - 1 and a bound on its rounding error.
struct Excess {
  double value = 0;
  double error = 0;
};

inline Excess evaluate_terms(const std::vector<ExcessTerm>& terms, double p) {
  Excess out;
  if (terms.empty()) return out;
  const double inv = 1.0 / p;
  const double one_minus = 1.0 - inv;
  double power = inv;
  std::uint64_t at = 1;
  double magnitude = 0;
  double ops = 0;
  for (const auto& t : terms) {
    while (at < t.exponent && power != 0) {
      power *= inv;
      ++at;
    }
    // Underflowed powers are below the smallest subnormal; count them as slack.
    if (power == 0) {
      out.error += std::numeric_limits<double>::denorm_min();
      continue;
    }
    double v = t.times_one_minus_inv_p ? power * one_minus : power;
    out.value += t.sign > 0 ? v : -v;
    magnitude += v;
    ops = std::max(ops, static_cast<double>(at) + 3);
  }
  ops += static_cast<double>(terms.size());
  out.error += gamma(ops) * magnitude;
  return out;
}

inline std::vector<ExcessTerm> closed_form_terms(const SSequence& s) {
  if (!s.has_closed_form()) throw DomainError("closed form requires a finite or cofinite sequence");
  std::vector<ExcessTerm> terms;
  if (s.kind() == SequenceKind::CofiniteTail && s.tail_start() == 1) return terms;
  // (1 - 1/p) * sum_{s in S u {0}} p^-s - 1, with the s = 0, 1 terms folded
  // into -p^-2 and a geometric tail folded into p^-m.
  terms.push_back({2, -1, false});
  for (auto t : s.finite_part())
    if (t >= 2) terms.push_back({t, +1, true});
  if (s.kind() == SequenceKind::CofiniteTail) terms.push_back({s.tail_start(), +1, false});
  std::stable_sort(terms.begin(), terms.end(),
                   [](const ExcessTerm& a, const ExcessTerm& b) { return a.exponent < b.exponent; });
  return terms;
}

inline std::vector<ExcessTerm> direct_sum_terms(const SSequence& s, unsigned exponent_bound) {
  std::vector<ExcessTerm> terms;
  for (std::uint64_t i = 2; i <= exponent_bound; ++i)
    if (const int d = s.delta(i); d != 0) terms.push_back({i, d, false});
  return terms;
}

// sum_{i > I} p^-i = 1 / (p^I (p - 1)), rounded up.
inline double exponent_tail(double p, unsigned exponent_bound) {
  const double v = std::pow(p, -static_cast<double>(exponent_bound)) / (p - 1);
  return v * (1 + gamma(4)) + std::numeric_limits<double>::denorm_min();
}

} // namespace detail

/// Local Euler factor by direct summation of the first `exponent_bound`
/// exponents. The bracket encloses the infinite sum: truncation error is at
/// most 1/(p^I (p-1)) and the true factor never exceeds 1.
inline RealBracket local_factor(const SSequence& s, std::uint64_t p, unsigned exponent_bound) {
  if (p < 2) throw DomainError("local factor requires a prime p");
  if (exponent_bound < 2) throw DomainError("exponent bound must be at least 2");
  const auto pd = static_cast<double>(p);
  const auto ex = detail::evaluate_terms(detail::direct_sum_terms(s, exponent_bound), pd);
  const double slack = detail::exponent_tail(pd, exponent_bound) + ex.error;
  const double point = 1.0 + ex.value;
  return {point - slack - kUnitRoundoff, point, std::min(1.0, point + slack + kUnitRoundoff)};
}

/// Exact limit of local_factor as the exponent bound grows, via
/// (1 - 1/p) * sum_{s in S u {0}} p^-s. Finite and cofinite sequences only.
inline double local_factor_closed(const SSequence& s, std::uint64_t p) {
  if (p < 2) throw DomainError("local factor requires a prime p");
  return 1.0 + detail::evaluate_terms(detail::closed_form_terms(s), static_cast<double>(p)).value;
}

struct TailBounds {
  double prime_tail_bound = 0;    // >= |sum_{p>P} log f_p| for every sequence
  double exponent_tail_bound = 0; // >= sum_{p<=P} 1/(p^I (p-1))
};

/// Sequence-independent truncation bounds. Uses |f_p - 1| <= 1/(p(p-1)),
/// |log(1+x)| <= 2|x| for |x| <= 1/2, and sum_{n>P} 1/(n(n-1)) = 1/P.
inline TailBounds tail_bounds(std::uint64_t prime_bound, unsigned exponent_bound) {
  if (prime_bound < 2) throw DomainError("prime bound must be at least 2");
  if (exponent_bound < 2) throw DomainError("exponent bound must be at least 2");
  TailBounds out;
  out.prime_tail_bound = (2.0 / static_cast<double>(prime_bound)) * (1 + detail::gamma(2));
  constexpr std::uint64_t kDirect = 1000;
  const auto primes = cached_primes(std::min(prime_bound, kDirect));
  double sum = 0;
  for (auto p : *primes) sum += detail::exponent_tail(p, exponent_bound);
  if (prime_bound > kDirect) {
    // sum_{n>K} n^-I/(n-1) <= sum_{n>K} 2 n^-(I+1) <= 2/(I K^I)
    sum += 2.0 / (exponent_bound * std::pow(static_cast<double>(kDirect), exponent_bound)) +
           std::numeric_limits<double>::denorm_min();
  }
  out.exponent_tail_bound = sum * (1 + detail::gamma(static_cast<double>(primes->size()) + 2));
  return out;
}

struct TailTerms {
  // Enclosure of sum_{p>P} log f_p.
  double prime_tail_lo = 0;
  double prime_tail_hi = 0;
  // Bounds on the accumulated logarithm for the primes p <= P.
  double exponent_tail_bound = 0;
  double rounding_bound = 0;

  double prime_tail_bound() const { return std::max(-prime_tail_lo, std::abs(prime_tail_hi)); }
};

struct DensityBracket {
  std::string sequence; // canonical descriptor
  double lo = 0;
  double point = 0;
  double hi = 0;
  std::uint64_t prime_bound = 0;
  unsigned exponent_bound = 0;
  TailTerms tail;
  double target_width = kDefaultTargetWidth;
  bool meets_target = false;

  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct DensityOptions {
  std::uint64_t prime_bound = kDefaultPrimeBound;
  unsigned exponent_bound = kDefaultExponentBound;
  double target_width = kDefaultTargetWidth;
  // Retry at 10^7 primes when the bracket is wider than target_width.
  bool escalate = true;
  unsigned threads = 0; // 0: thread_count()
};

namespace detail {

struct Interval {
  double lo = 0;
  double hi = 0;
};

} // namespace detail

/// Reusable evaluator for a fixed prime bound P and exponent bound I. Holds
/// the primes up to P and the partial prime zeta sums; immutable and safe to
/// share between threads.
class DensityEvaluator {
public:
  static constexpr std::size_t kBlock = 8192;

  explicit DensityEvaluator(std::uint64_t prime_bound = kDefaultPrimeBound,
                            unsigned exponent_bound = kDefaultExponentBound)
      : prime_bound_(prime_bound), exponent_bound_(exponent_bound) {
    if (prime_bound < 2) throw DomainError("prime bound must be at least 2");
    if (exponent_bound < 2) throw DomainError("exponent bound must be at least 2");
    primes_ = cached_primes(prime_bound);
    detail::CompensatedSum s2, s3;
    for (auto p : *primes_) {
      const double inv = 1.0 / p;
      s2.add(inv * inv);
      s3.add(inv * inv * inv);
    }
    zeta_tail_[0] = prime_zeta_tail(kPrimeZeta2, s2, 2);
    zeta_tail_[1] = prime_zeta_tail(kPrimeZeta3, s3, 3);
    exponent_tail_ = tail_bounds(prime_bound, exponent_bound).exponent_tail_bound;
  }

  std::uint64_t prime_bound() const { return prime_bound_; }
  unsigned exponent_bound() const { return exponent_bound_; }
  std::size_t prime_count() const { return primes_->size(); }

  /// Enclosure of sum_{p>P} p^-k.
  detail::Interval zeta_tail(std::uint64_t k) const {
    const double crude = power_tail_bound(k);
    if (k == 2 || k == 3) {
      const auto& z = zeta_tail_[k - 2];
      return {std::max(0.0, z.lo), std::min(crude, z.hi)};
    }
    return {0.0, crude};
  }

  /// Enclosure of sum_{p>P} log f_p for sequence s.
  detail::Interval prime_tail(const SSequence& s) const {
    const auto a1 = s.first_missing();
    if (!a1) return {0.0, 0.0};
    const auto lead = zeta_tail(*a1);
    // log(1+y) >= y - y^2 for y >= -1/2, and y^2 <= p^(-2 a1).
    const double square = power_tail_bound(2 * *a1);
    double lo = -lead.hi - square;
    double hi = -lead.lo;
    if (const auto a2 = s.next_member(*a1)) hi += zeta_tail(*a2).hi;
    hi = std::min(hi, 0.0);
    const double slack = detail::gamma(4) * (std::abs(lo) + std::abs(hi));
    return {lo - slack, hi + slack};
  }

  DensityBracket operator()(const SSequence& s, unsigned threads = 0) const {
    const bool closed = s.has_closed_form();
    const auto terms =
        closed ? detail::closed_form_terms(s) : detail::direct_sum_terms(s, exponent_bound_);
    const auto& primes = *primes_;
    const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;

    struct BlockResult {
      detail::CompensatedSum logs;
      double rounding = 0;
    };
    std::vector<BlockResult> partial(blocks);
    parallel_for(
        blocks,
        [&](std::size_t b) {
          auto& out = partial[b];
          const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
          for (std::size_t i = b * kBlock; i < end; ++i) {
            const auto ex = detail::evaluate_terms(terms, static_cast<double>(primes[i]));
            const double l = std::log1p(ex.value);
            out.logs.add(l);
            // f_p >= 3/4, so d/dy log1p(y) <= 4/3.
            out.rounding += kUnitRoundoff * std::abs(l) + (4.0 / 3.0) * ex.error;
          }
        },
        threads == 0 ? thread_count() : threads);

    detail::CompensatedSum total;
    double rounding = 0;
    for (const auto& r : partial) {
      total.add(r.logs);
      rounding += r.rounding;
    }
    const double log_sum = total.value();
    rounding = (rounding + total.error_bound()) * (1 + detail::gamma(static_cast<double>(blocks) + 2));

    DensityBracket out;
    out.sequence = s.to_string();
    out.prime_bound = prime_bound_;
    out.exponent_bound = exponent_bound_;
    const auto tail = prime_tail(s);
    out.tail.prime_tail_lo = tail.lo;
    out.tail.prime_tail_hi = tail.hi;
    out.tail.exponent_tail_bound = closed ? 0.0 : (4.0 / 3.0) * exponent_tail_;
    out.tail.rounding_bound = rounding;

    const double spread = rounding + out.tail.exponent_tail_bound;
    const double log_lo = log_sum - spread + tail.lo;
    const double log_hi = log_sum + spread + tail.hi;
    const double log_mid = log_sum + 0.5 * (tail.lo + tail.hi);
    // exp is faithful to within one ulp; the sums above add a few more.
    const double slack = detail::gamma(6);
    out.lo = log_lo == 0 ? 1.0 : std::exp(log_lo) * (1 - slack);
    out.hi = log_hi == 0 ? 1.0 : std::min(1.0, std::exp(log_hi) * (1 + slack));
    out.point = std::clamp(std::exp(log_mid), out.lo, out.hi);
    return out;
  }

private:
  // sum_{n>P} n^-k <= 1 / ((k-1) P^(k-1)), rounded up.
  double power_tail_bound(std::uint64_t k) const {
    const double v =
        1.0 / ((static_cast<double>(k) - 1) * std::pow(static_cast<double>(prime_bound_), static_cast<double>(k - 1)));
    return v * (1 + detail::gamma(4));
  }

  static detail::Interval prime_zeta_tail(double full, const detail::CompensatedSum& head, int k) {
    const double diff = full - head.value();
    // Constant rounded to double, each p^-k within (k+1) roundings, plus the
    // compensated summation and the final subtraction.
    const double err = kUnitRoundoff * full + detail::gamma(k + 1) * head.value() + head.error_bound() +
                       kUnitRoundoff * std::abs(diff);
    return {diff - 2 * err, diff + 2 * err};
  }

  std::uint64_t prime_bound_;
  unsigned exponent_bound_;
  std::shared_ptr<const std::vector<std::uint32_t>> primes_;
  detail::Interval zeta_tail_[2];
  double exponent_tail_ = 0;
};

/// h(E(S)) as a certified bracket. If the bracket is wider than
/// options.target_width and escalation is enabled, the prime bound is raised to
/// 10^7; meets_target reports whether the target was reached.
inline DensityBracket density(const SSequence& s, const DensityOptions& options = {}) {
  auto run = [&](std::uint64_t prime_bound) {
    DensityEvaluator eval(prime_bound, options.exponent_bound);
    auto b = eval(s, options.threads);
    b.target_width = options.target_width;
    b.meets_target = b.width() <= options.target_width;
    return b;
  };
  auto bracket = run(options.prime_bound);
  if (!bracket.meets_target && options.escalate && options.prime_bound < kEscalatedPrimeBound)
    bracket = run(kEscalatedPrimeBound);
  return bracket;
}

} // namespace esnd

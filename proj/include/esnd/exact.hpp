#pragma once

// Exact rational local factors, used to check closed-form identities such as
// the endpoint factors 1 - 1/p^3 and 1 - (p-1)/p^3 without rounding.

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "esnd/error.hpp"
#include "esnd/sequences.hpp"

namespace esnd {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// (1 - 1/p) * sum_{s in S u {0}} p^-s as an exact fraction, with the
/// cofinite tail summed as a geometric series.
inline Rational local_factor_exact(const SSequence& s, std::uint64_t p) {
  if (!s.has_closed_form()) throw DomainError("exact local factor requires a finite or cofinite sequence");
  if (p < 2) throw DomainError("local factor requires a prime p");
  const Rational inv(BigInt(1), BigInt(p));
  Rational sum = 1;
  for (auto t : s.finite_part()) sum += Rational(BigInt(1), boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(t)));
  Rational out = (1 - inv) * sum;
  if (s.kind() == SequenceKind::CofiniteTail)
    out += Rational(BigInt(1), boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(s.tail_start())));
  return out;
}

} // namespace esnd

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace soca {

/// Exact nonnegative integers of unbounded size (type-class multiplicities,
/// code-space dimensions). Backed by GMP.
using BigInt = mpz_class;

/// log2 of a positive BigInt, accurate to ~1e-15 absolute regardless of size.
double log2_of(const BigInt& value);

/// Smallest integer >= 2^log2_count, as a BigInt. For exponents beyond the
/// 53-bit mantissa the result is rounded up at mantissa granularity.
BigInt ceil_exp2(double log2_count);

}  // namespace soca

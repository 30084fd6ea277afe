#include "soca/bigint.hpp"

#include <cmath>

namespace soca {

double log2_of(const BigInt& value) {
    long exponent = 0;
    double mantissa = mpz_get_d_2exp(&exponent, value.get_mpz_t());
    return std::log2(mantissa) + static_cast<double>(exponent);
}

BigInt ceil_exp2(double log2_count) {
    if (log2_count <= 0.0) return 1;
    if (log2_count < 52.0) {
        return BigInt(static_cast<unsigned long>(std::ceil(std::exp2(log2_count))));
    }
    // Split off an exact power of two so the mantissa stays in double range.
    double shift_d = std::floor(log2_count) - 52.0;
    double frac = log2_count - 52.0 - shift_d;  // in [0, 1)
    BigInt mant(std::ceil(std::exp2(52.0 + frac)));
    mpz_mul_2exp(mant.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(shift_d));
    return mant;
}

}  // namespace soca

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hsv {

// Arbitrary-size unsigned integer, base 1e9 limbs, little-endian.
// Only what exact parameter reporting needs: multiply, add, power,
// halving with remainder, decimal round-trip.
class BigUint {
public:
    BigUint() = default;
    explicit BigUint(uint64_t v);
    static BigUint from_decimal(const std::string& s);

    BigUint& operator*=(const BigUint& rhs);
    BigUint& operator+=(const BigUint& rhs);
    friend BigUint operator*(BigUint a, const BigUint& b) { return a *= b; }
    friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }

    static BigUint pow(const BigUint& base, uint32_t exp);

    // Divides by 2; returns the remainder bit (0 or 1).
    uint32_t halve();

    bool is_zero() const { return limbs_.empty(); }
    bool operator==(const BigUint& rhs) const { return limbs_ == rhs.limbs_; }

    std::string to_string() const;

    // Value times 2^-shift as a double; good enough for the decimal
    // approximations printed next to exact values.
    double to_double() const;

private:
    void trim();
    std::vector<uint32_t> limbs_;  // base 1e9
};

}  // namespace hsv

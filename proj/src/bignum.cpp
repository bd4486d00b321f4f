#include "hsv/bignum.hpp"

#include <cstdio>
#include <stdexcept>

namespace hsv {

namespace {
constexpr uint32_t kBase = 1000000000u;
}

BigUint::BigUint(uint64_t v) {
    while (v > 0) {
        limbs_.push_back(static_cast<uint32_t>(v % kBase));
        v /= kBase;
    }
}

BigUint BigUint::from_decimal(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("BigUint: empty decimal string");
    BigUint out;
    for (char c : s) {
        if (c < '0' || c > '9') throw std::invalid_argument("BigUint: bad digit");
        out *= BigUint(10);
        out += BigUint(static_cast<uint64_t>(c - '0'));
    }
    return out;
}

void BigUint::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

BigUint& BigUint::operator+=(const BigUint& rhs) {
    uint64_t carry = 0;
    size_t n = std::max(limbs_.size(), rhs.limbs_.size());
    limbs_.resize(n, 0);
    for (size_t i = 0; i < n; ++i) {
        uint64_t sum = carry + limbs_[i] + (i < rhs.limbs_.size() ? rhs.limbs_[i] : 0);
        limbs_[i] = static_cast<uint32_t>(sum % kBase);
        carry = sum / kBase;
    }
    if (carry) limbs_.push_back(static_cast<uint32_t>(carry));
    return *this;
}

BigUint& BigUint::operator*=(const BigUint& rhs) {
    if (is_zero() || rhs.is_zero()) {
        limbs_.clear();
        return *this;
    }
    std::vector<uint64_t> acc(limbs_.size() + rhs.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < rhs.limbs_.size(); ++j) {
            uint64_t cur =
                acc[i + j] + carry + static_cast<uint64_t>(limbs_[i]) * rhs.limbs_[j];
            acc[i + j] = cur % kBase;
            carry = cur / kBase;
        }
        size_t pos = i + rhs.limbs_.size();
        while (carry) {
            uint64_t cur = acc[pos] + carry;
            acc[pos] = cur % kBase;
            carry = cur / kBase;
            ++pos;
        }
    }
    limbs_.assign(acc.begin(), acc.end());
    trim();
    return *this;
}

BigUint BigUint::pow(const BigUint& base, uint32_t exp) {
    BigUint out(1);
    for (uint32_t i = 0; i < exp; ++i) out *= base;
    return out;
}

uint32_t BigUint::halve() {
    uint32_t rem = 0;
    for (size_t i = limbs_.size(); i-- > 0;) {
        uint64_t cur = static_cast<uint64_t>(rem) * kBase + limbs_[i];
        limbs_[i] = static_cast<uint32_t>(cur / 2);
        rem = static_cast<uint32_t>(cur % 2);
    }
    trim();
    return rem;
}

std::string BigUint::to_string() const {
    if (limbs_.empty()) return "0";
    std::string out = std::to_string(limbs_.back());
    char buf[16];
    for (size_t i = limbs_.size() - 1; i-- > 0;) {
        std::snprintf(buf, sizeof buf, "%09u", limbs_[i]);
        out += buf;
    }
    return out;
}

double BigUint::to_double() const {
    double out = 0.0;
    for (size_t i = limbs_.size(); i-- > 0;) out = out * kBase + limbs_[i];
    return out;
}

}  // namespace hsv

#include "cfo/bits.hpp"

#include <algorithm>
#include <stdexcept>

namespace cfo {

std::string Digest128::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 0; i < 16; ++i) out[15 - i] = digits[(hi >> (4 * i)) & 0xf];
    for (int i = 0; i < 16; ++i) out[31 - i] = digits[(lo >> (4 * i)) & 0xf];
    return out;
}

Digest128 digest128(const std::string& bytes) {
    uint64_t a = 0xcbf29ce484222325ULL;
    uint64_t b = 0xcbf29ce484222325ULL ^ 0x9e3779b97f4a7c15ULL;
    for (unsigned char c : bytes) {
        a = (a ^ c) * 0x100000001b3ULL;
        b = (b ^ c) * 0x100000001b3ULL;
        b ^= b >> 29;
    }
    return Digest128{a, b};
}

BigUint::BigUint(uint64_t v) {
    limbs_.push_back(static_cast<uint32_t>(v & 0xffffffffULL));
    limbs_.push_back(static_cast<uint32_t>(v >> 32));
    trim();
}

void BigUint::trim() {
    while (limbs_.size() > 1 && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) limbs_.push_back(0);
}

BigUint BigUint::operator+(const BigUint& o) const {
    BigUint r;
    r.limbs_.assign(std::max(limbs_.size(), o.limbs_.size()) + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
        uint64_t s = carry;
        if (i < limbs_.size()) s += limbs_[i];
        if (i < o.limbs_.size()) s += o.limbs_[i];
        r.limbs_[i] = static_cast<uint32_t>(s & 0xffffffffULL);
        carry = s >> 32;
    }
    r.trim();
    return r;
}

BigUint BigUint::operator-(const BigUint& o) const {
    if (compare(o) < 0) throw std::underflow_error("BigUint subtraction underflow");
    BigUint r;
    r.limbs_.assign(limbs_.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < limbs_.size(); ++i) {
        int64_t s = static_cast<int64_t>(limbs_[i]) - borrow - (i < o.limbs_.size() ? o.limbs_[i] : 0);
        if (s < 0) {
            s += (1LL << 32);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.limbs_[i] = static_cast<uint32_t>(s);
    }
    r.trim();
    return r;
}

BigUint BigUint::operator*(const BigUint& o) const {
    BigUint r;
    r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
    for (size_t i = 0; i < limbs_.size(); ++i) {
        if (limbs_[i] == 0) continue;
        uint64_t carry = 0;
        for (size_t j = 0; j < o.limbs_.size() || carry; ++j) {
            uint64_t cur = r.limbs_[i + j] + carry;
            if (j < o.limbs_.size()) cur += static_cast<uint64_t>(limbs_[i]) * o.limbs_[j];
            r.limbs_[i + j] = static_cast<uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
    }
    r.trim();
    return r;
}

int BigUint::compare(const BigUint& o) const {
    if (limbs_.size() != o.limbs_.size())
        return limbs_.size() < o.limbs_.size() ? -1 : 1;
    for (size_t i = limbs_.size(); i-- > 0;)
        if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
    return 0;
}

BigUint BigUint::pow(const BigUint& base, uint64_t e) {
    BigUint r(1), b = base;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

BigUint BigUint::factorial(uint64_t n) {
    BigUint r(1);
    for (uint64_t i = 2; i <= n; ++i) r = r * BigUint(i);
    return r;
}

BigUint BigUint::two_pow_capped(const BigUint& e, uint64_t cap_bits) {
    if (!e.fits_u64() || e.to_u64() > cap_bits)
        throw std::overflow_error("context bound exponent exceeds representable size");
    return pow(BigUint(2), e.to_u64());
}

bool BigUint::fits_u64() const { return limbs_.size() <= 2; }

uint64_t BigUint::to_u64() const {
    if (!fits_u64()) return UINT64_MAX;
    uint64_t v = limbs_[0];
    if (limbs_.size() > 1) v |= static_cast<uint64_t>(limbs_[1]) << 32;
    return v;
}

std::string BigUint::to_string() const {
    std::vector<uint32_t> work = limbs_;
    std::string out;
    bool all_zero;
    do {
        uint64_t rem = 0;
        all_zero = true;
        for (size_t i = work.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | work[i];
            work[i] = static_cast<uint32_t>(cur / 10);
            rem = cur % 10;
            if (work[i]) all_zero = false;
        }
        out.push_back(static_cast<char>('0' + rem));
    } while (!all_zero);
    std::reverse(out.begin(), out.end());
    return out;
}

} // namespace cfo

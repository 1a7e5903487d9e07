#ifndef CFO_BITS_HPP
#define CFO_BITS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace cfo {

// SplitMix64: the project-wide seedable PRNG. 64-bit state, one multiply-xor
// chain per output (Steele/Lea/Flood). Every sampled order and generated
// instance is reproducible from a single uint64 seed.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed = 0) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound) without modulo bias worth caring about at desk scale
    uint64_t below(uint64_t bound) { return bound == 0 ? 0 : next() % bound; }

    int range(int lo, int hi) { // inclusive
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double unit() { return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0); }

    template <typename T>
    void shuffle(std::vector<T>& v) { // Fisher-Yates, back to front
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

// 128-bit digest: two independent FNV-1a-64 passes (offset bases differ by a
// fixed tweak on the second lane). Stable across platforms and runs; used for
// the context digests printed by the CLI.
struct Digest128 {
    uint64_t hi = 0, lo = 0;
    bool operator==(const Digest128&) const = default;
    std::string hex() const;
};

Digest128 digest128(const std::string& bytes);

// Just enough unsigned bignum for the context-count recurrences: add, mul,
// pow, factorial, compare, decimal printing. Little-endian base 2^32 limbs.
class BigUint {
public:
    BigUint() : limbs_{0} {}
    BigUint(uint64_t v);

    static BigUint pow(const BigUint& base, uint64_t e);
    static BigUint factorial(uint64_t n);
    static BigUint two_pow_capped(const BigUint& e, uint64_t cap_bits);

    BigUint operator+(const BigUint& o) const;
    BigUint operator*(const BigUint& o) const;
    BigUint operator-(const BigUint& o) const; // requires *this >= o

    int compare(const BigUint& o) const;
    bool operator<(const BigUint& o) const { return compare(o) < 0; }
    bool operator==(const BigUint& o) const { return compare(o) == 0; }
    bool operator<=(const BigUint& o) const { return compare(o) <= 0; }

    bool fits_u64() const;
    uint64_t to_u64() const; // saturates at UINT64_MAX when too large
    std::string to_string() const;

private:
    std::vector<uint32_t> limbs_;
    void trim();
};

} // namespace cfo

#endif

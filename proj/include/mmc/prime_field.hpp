#pragma once

// Residue arithmetic modulo a prime q. Residues are uint32_t in [0, q).

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mmc {

class Field {
public:
    explicit Field(std::uint32_t q) : q_(q) {
        if (!is_prime(q))
            throw std::invalid_argument("field order must be prime, got " + std::to_string(q));
    }

    std::uint32_t order() const { return q_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const {
        return a >= b ? a - b : a + q_ - b;
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : q_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>((std::uint64_t(a) * b) % q_);
    }

    // Multiplicative inverse by extended Euclid; a must be nonzero.
    std::uint32_t inv(std::uint32_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = q_, new_r = a;
        while (new_r != 0) {
            std::int64_t quot = r / new_r;
            t -= quot * new_t; std::swap(t, new_t);
            r -= quot * new_r; std::swap(r, new_r);
        }
        if (t < 0) t += q_;
        return static_cast<std::uint32_t>(t);
    }

    bool operator==(const Field& o) const { return q_ == o.q_; }
    bool operator!=(const Field& o) const { return q_ != o.q_; }

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::uint32_t d = 3; std::uint64_t(d) * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

private:
    std::uint32_t q_;
};

} // namespace mmc

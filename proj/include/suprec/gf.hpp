#pragma once

#include <array>
#include <stdexcept>
#include <vector>

namespace suprec {

// Arithmetic in GF(q) for prime q, and for q = 27 as GF(3)[x]/(x^3 + 2x + 1).
// Elements are indices in [0, q); for extension fields the index encodes the
// polynomial coefficients in base p. Only the small fields needed for Paley
// constructions up to order 32 are supported.
class FiniteField {
public:
    explicit FiniteField(int q) : q_(q) {
        if (q == 27) {
            p_ = 3;
            k_ = 3;
        } else if (is_prime(q) && q >= 2) {
            p_ = q;
            k_ = 1;
        } else {
            throw std::invalid_argument("unsupported field order " + std::to_string(q));
        }
    }

    int order() const { return q_; }

    int add(int a, int b) const { return combine(a, b, +1); }
    int sub(int a, int b) const { return combine(a, b, -1); }

    int mul(int a, int b) const {
        if (k_ == 1) return static_cast<int>((static_cast<long long>(a) * b) % p_);
        // Polynomial product over GF(3), reduced by x^3 = x + 2.
        std::array<int, 5> prod{};
        auto da = digits(a), db = digits(b);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % 3;
        for (int d = 4; d >= 3; --d) {
            int c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            prod[d - 2] = (prod[d - 2] + c) % 3;       // x^d -> x^{d-2} ...
            prod[d - 3] = (prod[d - 3] + 2 * c) % 3;   // ... + 2 x^{d-3}
        }
        return prod[0] + 3 * prod[1] + 9 * prod[2];
    }

    int pow(int a, int e) const {
        int r = 1;
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    // Quadratic character: +1 for nonzero squares, -1 for non-squares, 0 for 0.
    int chi(int a) const {
        if (a == 0) return 0;
        return pow(a, (q_ - 1) / 2) == 1 ? 1 : -1;
    }

    static bool is_prime(int n) {
        if (n < 2) return false;
        for (int d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    static bool is_prime_power(int n) {
        if (n < 2) return false;
        for (int p = 2; p <= n; ++p) {
            if (!is_prime(p)) continue;
            int m = n;
            while (m % p == 0) m /= p;
            if (m == 1) return true;
            if (n % p == 0) return false;
        }
        return false;
    }

private:
    std::array<int, 3> digits(int a) const { return {a % 3, (a / 3) % 3, a / 9}; }

    int combine(int a, int b, int sign) const {
        if (k_ == 1) return ((a + sign * b) % p_ + p_) % p_;
        auto da = digits(a), db = digits(b);
        int r = 0, base = 1;
        for (int i = 0; i < 3; ++i) {
            r += (((da[i] + sign * db[i]) % 3 + 3) % 3) * base;
            base *= 3;
        }
        return r;
    }

    int q_;
    int p_;
    int k_;
};

}  // namespace suprec

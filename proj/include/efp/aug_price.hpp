#pragma once

#include <string>

#include "efp/rational.hpp"

namespace efp {

// A price of the form  base + eps * E  where E is a symbolic positive
// infinitesimal: smaller than every positive rational, so comparison is
// lexicographic. Charging a buyer "just above p" is represented exactly as
// {p, +1}; budgets accumulate negative eps counts as those charges are
// deducted. Keeping E symbolic avoids ever picking a concrete epsilon while
// the auction runs.
struct AugPrice {
    Rat base;
    long eps = 0;

    AugPrice() = default;
    AugPrice(Rat b, long e = 0) : base(std::move(b)), eps(e) {}

    static AugPrice zero() { return AugPrice(Rat(0), 0); }

    AugPrice operator+(const AugPrice& o) const { return {base + o.base, eps + o.eps}; }
    AugPrice operator-(const AugPrice& o) const { return {base - o.base, eps - o.eps}; }
    AugPrice operator-() const { return {-base, -eps}; }
    AugPrice& operator+=(const AugPrice& o) {
        base += o.base;
        eps += o.eps;
        return *this;
    }
    AugPrice& operator-=(const AugPrice& o) {
        base -= o.base;
        eps -= o.eps;
        return *this;
    }
    // Scaling by an item count.
    AugPrice scaled(long k) const { return {base * k, eps * k}; }
};

inline int cmp(const AugPrice& a, const AugPrice& b) {
    int c = ::cmp(a.base, b.base);
    if (c != 0) return c;
    return a.eps < b.eps ? -1 : a.eps > b.eps ? 1 : 0;
}

inline bool operator==(const AugPrice& a, const AugPrice& b) { return cmp(a, b) == 0; }
inline bool operator!=(const AugPrice& a, const AugPrice& b) { return cmp(a, b) != 0; }
inline bool operator<(const AugPrice& a, const AugPrice& b) { return cmp(a, b) < 0; }
inline bool operator<=(const AugPrice& a, const AugPrice& b) { return cmp(a, b) <= 0; }
inline bool operator>(const AugPrice& a, const AugPrice& b) { return cmp(a, b) > 0; }
inline bool operator>=(const AugPrice& a, const AugPrice& b) { return cmp(a, b) >= 0; }

// Floor of num/den where both ends may carry an eps component and
// den.base > 0. First-order expansion of (B + bE) / (Q + qE) around E = 0:
// the quotient is B/Q + ((bQ - Bq)/Q^2) E + O(E^2), and the higher-order
// terms only matter when the linear coefficient vanishes, in which case the
// division is exact. Hence:
//   B/Q not integral        -> floor(B/Q)
//   B/Q integral, bQ-Bq >= 0 -> B/Q
//   B/Q integral, bQ-Bq <  0 -> B/Q - 1
Int floor_div(const AugPrice& num, const AugPrice& den);

std::string aug_str(const AugPrice& p);

// base + eps * value, for reporting under a concrete epsilon.
Rat concretize(const AugPrice& p, const Rat& eps_value);

}  // namespace efp

#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace efp {

// Exact rational arithmetic. All market quantities (valuations, budgets,
// prices, payments) are mpq rationals; nothing in the engine may round.
using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat(long num, long den = 1) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "num/den" or a plain integer string. Rejects anything else
// (in particular decimal points and exponents).
std::optional<Rat> rat_parse(const std::string& text);

std::string rat_str(const Rat& r);

// Floor of a/b for rationals, b != 0.
Int floor_div_rat(const Rat& a, const Rat& b);

// Display-only decimal rendering with the given number of fraction digits,
// truncated toward zero. Exact values stay in rat_str form.
std::string rat_decimal(const Rat& r, int digits = 4);

}  // namespace efp

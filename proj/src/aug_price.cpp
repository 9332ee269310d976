#include "efp/aug_price.hpp"

#include <stdexcept>

namespace efp {

Int floor_div(const AugPrice& num, const AugPrice& den) {
    if (den.base <= 0) throw std::domain_error("floor_div: divisor must have positive base");
    Rat q = num.base / den.base;
    if (q.get_den() != 1) return floor_div_rat(num.base, den.base);
    // Integral base quotient; the sign of the infinitesimal term decides.
    Rat coeff = Rat(num.eps) * den.base - num.base * Rat(den.eps);
    Int k = q.get_num();
    if (coeff >= 0) return k;
    return k - 1;
}

std::string aug_str(const AugPrice& p) {
    std::string s = rat_str(p.base);
    if (p.eps > 0) s += "+" + std::to_string(p.eps) + "e";
    if (p.eps < 0) s += std::to_string(p.eps) + "e";
    return s;
}

Rat concretize(const AugPrice& p, const Rat& eps_value) {
    return p.base + Rat(p.eps) * eps_value;
}

}  // namespace efp

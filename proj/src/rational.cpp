#include "efp/rational.hpp"

#include <cctype>

namespace efp {

std::optional<Rat> rat_parse(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t slash = text.find('/');
    auto is_int = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        return true;
    };
    std::string num = slash == std::string::npos ? text : text.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) return std::nullopt;
    Int n(num), d(den);
    if (d == 0) return std::nullopt;
    Rat r(n, d);
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Int floor_div_rat(const Rat& a, const Rat& b) {
    Rat q = a / b;
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return fl;
}

std::string rat_decimal(const Rat& r, int digits) {
    bool neg = r < 0;
    Rat a = neg ? Rat(-r) : r;
    Int ip = a.get_num() / a.get_den();
    Rat frac = a - Rat(ip);
    std::string out = (neg ? "-" : "") + ip.get_str();
    if (digits <= 0) return out;
    out += ".";
    for (int i = 0; i < digits; ++i) {
        frac *= 10;
        Int d = frac.get_num() / frac.get_den();
        out += d.get_str();
        frac -= Rat(d);
    }
    return out;
}

}  // namespace efp

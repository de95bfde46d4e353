#include "nestlab/real.hpp"

#include <cstdlib>
#include <ostream>

namespace nestlab {

Real Real::parse(const std::string& text, prec_t prec) {
    Real r(prec);
    if (text.empty() || mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN) != 0) {
        throw Error(errc::malformed_input, "bad real literal '" + text + "'");
    }
    return r;
}

std::string Real::to_decimal() const {
    if (mpfr_zero_p(v_)) return "0";
    if (!mpfr_number_p(v_)) return mpfr_nan_p(v_) ? "nan" : (mpfr_sgn(v_) > 0 ? "inf" : "-inf");

    mpfr_exp_t exp10 = 0;
    char* s = mpfr_get_str(nullptr, &exp10, 10, 0, v_, MPFR_RNDN);
    std::string digits(s);
    mpfr_free_str(s);

    std::string sign;
    if (digits[0] == '-') {
        sign = "-";
        digits.erase(0, 1);
    }
    // value = 0.digits * 10^exp10; emit d.igits e(exp10-1)
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out = sign + digits.substr(0, 1);
    if (digits.size() > 1) out += "." + digits.substr(1);
    long e = static_cast<long>(exp10) - 1;
    if (e != 0) out += "e" + std::to_string(e);
    return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_decimal(); }

} // namespace nestlab

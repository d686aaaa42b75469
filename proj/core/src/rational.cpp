#include "amencert/rational.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "amencert/guards.hpp"

namespace amencert {

namespace {
Guards g_guards;
}

const Guards& guards() { return g_guards; }
void set_guards(const Guards& g) { g_guards = g; }

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw SpecError("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(text.substr(0, slash), 10) != 0 ||
            den.set_str(text.substr(slash + 1), 10) != 0 || den == 0)
            throw SpecError("malformed rational literal: " + text);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac_digits = text.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+")
            throw SpecError("malformed decimal literal: " + text);
        mpz_class num;
        if (num.set_str(digits, 10) != 0)
            throw SpecError("malformed decimal literal: " + text);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_digits);
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    mpz_class num;
    if (num.set_str(text, 10) != 0) throw SpecError("malformed integer literal: " + text);
    return Rational(num);
}

double to_double_nearest_even(const Rational& r) {
    if (r == 0) return 0.0;
    const bool neg = r < 0;
    mpz_class num = neg ? mpz_class(-r.get_num()) : r.get_num();
    mpz_class den = r.get_den();

    // Scale num/den by 2^shift so the integer quotient has exactly 54 bits,
    // then round the low bit away (nearest, ties to even on bit 1).
    long nbits = mpz_sizeinbase(num.get_mpz_t(), 2);
    long dbits = mpz_sizeinbase(den.get_mpz_t(), 2);
    long shift = 54 - (nbits - dbits);

    mpz_class n2 = num, d2 = den;
    if (shift >= 0)
        mpz_mul_2exp(n2.get_mpz_t(), n2.get_mpz_t(), shift);
    else
        mpz_mul_2exp(d2.get_mpz_t(), d2.get_mpz_t(), -shift);

    mpz_class q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
    long qbits = mpz_sizeinbase(q.get_mpz_t(), 2);
    if (qbits < 54) {  // quotient landed one bit short; scale once more
        mpz_mul_2exp(n2.get_mpz_t(), n2.get_mpz_t(), 1);
        shift += 1;
        mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
        qbits = mpz_sizeinbase(q.get_mpz_t(), 2);
    }

    // q has qbits >= 54 bits; we want a 53-bit mantissa. Round off (qbits - 53).
    long drop = qbits - 53;
    mpz_class low;
    mpz_fdiv_r_2exp(low.get_mpz_t(), q.get_mpz_t(), drop);
    mpz_class high;
    mpz_fdiv_q_2exp(high.get_mpz_t(), q.get_mpz_t(), drop);
    mpz_class half;
    mpz_ui_pow_ui(half.get_mpz_t(), 2, drop - 1);

    int cmp = mpz_cmp(low.get_mpz_t(), half.get_mpz_t());
    bool round_up;
    if (cmp > 0)
        round_up = true;
    else if (cmp < 0)
        round_up = false;
    else if (rem != 0)  // exact halfway only if no remainder survived
        round_up = true;
    else
        round_up = mpz_odd_p(high.get_mpz_t());
    if (round_up) high += 1;

    double mant = high.get_d();  // <= 2^53, exact
    double result = std::ldexp(mant, static_cast<int>(drop - shift));
    return neg ? -result : result;
}

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw SpecError("non-finite double cannot be promoted to a rational");
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

}  // namespace amencert

#ifndef DREP_RATIONAL_HPP
#define DREP_RATIONAL_HPP

#include <string>

#include <gmpxx.h>

namespace drep
{

// Elements of the base field k. mpq_class keeps values canonical
// (reduced, positive denominator) after every arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1)
{
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Exact "p/q" text, "p" when the denominator is 1.
inline std::string to_string(const Rational &q)
{
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

} // namespace drep

#endif

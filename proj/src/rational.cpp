#include "bubbletree/rational.hpp"

#include <limits>
#include <stdexcept>

namespace bubbletree {

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(const mpq_class& v) : q_(v) { q_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    std::size_t slash = s.find('/');
    auto digits_ok = [&](std::size_t b, std::size_t e) {
        if (b >= e) return false;
        for (std::size_t i = b; i < e; ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    std::size_t numEnd = slash == std::string::npos ? s.size() : slash;
    if (!digits_ok(start, numEnd) || (slash != std::string::npos && !digits_ok(slash + 1, s.size())))
        throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (s[0] == '+') s.erase(0, 1);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational literal '" + s + "'");
    if (q.get_den() == 0) throw std::domain_error("rational with zero denominator");
    q.canonicalize();
    return Rational(q);
}

std::int64_t Rational::to_int64() const {
    if (!is_integer()) throw std::domain_error("rational " + str() + " is not an integer");
    const mpz_class& n = q_.get_num();
    if (!n.fits_slong_p()) throw std::domain_error("integer out of range: " + str());
    return n.get_si();
}

std::string Rational::str() const { return q_.get_str(10); }

Rational& Rational::operator+=(const Rational& o) {
    q_ += o.q_;
    return *this;
}
Rational& Rational::operator-=(const Rational& o) {
    q_ -= o.q_;
    return *this;
}
Rational& Rational::operator*=(const Rational& o) {
    q_ *= o.q_;
    return *this;
}
Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero rational");
    q_ /= o.q_;
    return *this;
}

Rational Rational::pow(unsigned e) const {
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), q_.get_num().get_mpz_t(), e);
    mpz_pow_ui(d.get_mpz_t(), q_.get_den().get_mpz_t(), e);
    return Rational(mpq_class(n, d));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace bubbletree

#ifndef DAGPH_FIELD_HPP
#define DAGPH_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dagph {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

struct UnsupportedBackend : std::logic_error {
    using std::logic_error::logic_error;
};

// Arbitrary-precision rationals.  cpp_rational keeps values in lowest
// terms with positive denominator, so equality is structural.
struct RationalField {
    using Elem = Rational;
    static constexpr bool has_inner_product = true;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    Elem from_int(long v) const { return Elem(v); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem div(const Elem& a, const Elem& b) const {
        if (b == 0) throw std::domain_error("division by zero");
        return a / b;
    }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const { return div(one(), a); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    std::string str(const Elem& a) const { return a.str(); }
    bool same_field(const RationalField&) const { return true; }
};

// Prime field Z_p with residues stored in [0, p).  p*p must fit in a
// signed 64-bit word; the default prime 46337 satisfies p^2 < 2^31.
struct PrimeField {
    using Elem = std::int64_t;
    static constexpr bool has_inner_product = false;
    static constexpr std::int64_t kDefaultPrime = 46337;

    std::int64_t p;

    explicit PrimeField(std::int64_t prime = kDefaultPrime) : p(prime) {
        if (p < 2) throw std::invalid_argument("prime must be >= 2");
        for (std::int64_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
    }

    Elem zero() const { return 0; }
    Elem one() const { return p == 1 ? 0 : 1; }
    Elem from_int(long v) const {
        Elem r = v % p;
        return r < 0 ? r + p : r;
    }
    Elem add(Elem a, Elem b) const {
        Elem r = a + b;
        return r >= p ? r - p : r;
    }
    Elem sub(Elem a, Elem b) const {
        Elem r = a - b;
        return r < 0 ? r + p : r;
    }
    Elem mul(Elem a, Elem b) const { return (a * b) % p; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p - a; }
    Elem inv(Elem a) const {
        if (a == 0) throw std::domain_error("division by zero");
        // extended Euclid
        Elem t = 0, newt = 1, r = p, newr = a;
        while (newr != 0) {
            Elem q = r / newr;
            Elem tmp = t - q * newt;
            t = newt;
            newt = tmp;
            tmp = r - q * newr;
            r = newr;
            newr = tmp;
        }
        return t < 0 ? t + p : t;
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    std::string str(Elem a) const { return std::to_string(a); }
    bool same_field(const PrimeField& o) const { return p == o.p; }
};

}  // namespace dagph

#endif

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace reflexa {

/// Base-field descriptor: the rationals (p == 0) or a prime field GF(p).
struct Field {
    unsigned long p = 0;

    static Field rationals() { return Field{0}; }
    static Field gf(unsigned long prime) {
        if (prime < 2) throw std::invalid_argument("GF modulus must be a prime >= 2");
        for (unsigned long d = 2; d * d <= prime; ++d)
            if (prime % d == 0) throw std::invalid_argument("GF modulus must be prime");
        return Field{prime};
    }

    bool is_rational() const { return p == 0; }
    bool operator==(const Field& o) const { return p == o.p; }
    bool operator!=(const Field& o) const { return p != o.p; }

    std::string name() const { return is_rational() ? "Q" : "GF(" + std::to_string(p) + ")"; }
};

inline void require_same_field(const Field& a, const Field& b) {
    if (a != b)
        throw std::invalid_argument("field mismatch: " + a.name() + " vs " + b.name());
}

/// Exact field element: an arbitrary-precision rational, or a reduced
/// residue mod a prime. Elements of different fields never combine.
class Scalar {
public:
    Scalar() : field_(Field::rationals()), q_(0), r_(0) {}

    static Scalar zero(const Field& f) { return Scalar(f, 0); }
    static Scalar one(const Field& f) { return Scalar(f, 1); }

    Scalar(const Field& f, long value) : field_(f), q_(0), r_(0) {
        if (f.is_rational()) {
            q_ = value;
        } else {
            long m = static_cast<long>(f.p);
            long v = value % m;
            if (v < 0) v += m;
            r_ = static_cast<unsigned long>(v);
        }
    }

    static Scalar rational(const mpq_class& q) {
        Scalar s;
        s.q_ = q;
        s.q_.canonicalize();
        return s;
    }

    static Scalar modular(unsigned long residue, const Field& f) {
        if (f.is_rational()) throw std::invalid_argument("modular scalar needs GF field");
        Scalar s;
        s.field_ = f;
        s.r_ = residue % f.p;
        return s;
    }

    const Field& field() const { return field_; }
    bool is_zero() const { return field_.is_rational() ? q_ == 0 : r_ == 0; }
    bool is_one() const { return field_.is_rational() ? q_ == 1 : r_ == 1; }

    const mpq_class& rational_value() const {
        if (!field_.is_rational()) throw std::logic_error("not a rational scalar");
        return q_;
    }
    unsigned long residue() const {
        if (field_.is_rational()) throw std::logic_error("not a modular scalar");
        return r_;
    }

    Scalar operator+(const Scalar& o) const {
        require_same_field(field_, o.field_);
        Scalar s(*this);
        if (field_.is_rational())
            s.q_ += o.q_;
        else
            s.r_ = (r_ + o.r_) % field_.p;
        return s;
    }

    Scalar operator-() const {
        Scalar s(*this);
        if (field_.is_rational())
            s.q_ = -q_;
        else if (r_ != 0)
            s.r_ = field_.p - r_;
        return s;
    }

    Scalar operator-(const Scalar& o) const { return *this + (-o); }

    Scalar operator*(const Scalar& o) const {
        require_same_field(field_, o.field_);
        Scalar s(*this);
        if (field_.is_rational()) {
            s.q_ *= o.q_;
        } else {
            // p fits in 32 bits in practice; widen to avoid overflow anyway.
            unsigned __int128 prod = (unsigned __int128)r_ * o.r_;
            s.r_ = static_cast<unsigned long>(prod % field_.p);
        }
        return s;
    }

    Scalar inverse() const {
        if (is_zero()) throw std::domain_error("division by zero");
        Scalar s(*this);
        if (field_.is_rational()) {
            s.q_ = 1 / q_;
        } else {
            // extended Euclid on (r, p)
            long long t = 0, newt = 1;
            long long rr = static_cast<long long>(field_.p), newr = static_cast<long long>(r_);
            while (newr != 0) {
                long long qt = rr / newr;
                long long tmp = t - qt * newt;
                t = newt;
                newt = tmp;
                tmp = rr - qt * newr;
                rr = newr;
                newr = tmp;
            }
            if (t < 0) t += static_cast<long long>(field_.p);
            s.r_ = static_cast<unsigned long>(t);
        }
        return s;
    }

    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

    bool operator==(const Scalar& o) const {
        if (field_ != o.field_) return false;
        return field_.is_rational() ? q_ == o.q_ : r_ == o.r_;
    }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// "a/b" or "a" for rationals, "r mod p" for modular.
    std::string str() const {
        if (field_.is_rational()) return q_.get_str();
        return std::to_string(r_) + " mod " + std::to_string(field_.p);
    }

    static Scalar parse(const std::string& text, const Field& f) {
        if (f.is_rational()) {
            auto pos = text.find(" mod ");
            std::string body = pos == std::string::npos ? text : text.substr(0, pos);
            mpq_class q;
            if (q.set_str(body, 10) != 0)
                throw std::invalid_argument("bad rational literal: " + text);
            q.canonicalize();
            if (q.get_den() <= 0) throw std::invalid_argument("bad rational literal: " + text);
            return rational(q);
        }
        auto pos = text.find(" mod ");
        std::string body = pos == std::string::npos ? text : text.substr(0, pos);
        mpz_class z;
        if (z.set_str(body, 10) != 0)
            throw std::invalid_argument("bad modular literal: " + text);
        mpz_class m = z % static_cast<unsigned long>(f.p);
        if (m < 0) m += f.p;
        return modular(m.get_ui(), f);
    }

private:
    Field field_;
    mpq_class q_;
    unsigned long r_;
};

}  // namespace reflexa

#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wdwalk/errors.hpp"
#include "wdwalk/ratpoly.hpp"
#include "wdwalk/rational.hpp"

/*
 * Number fields K = Q[x]/(m) for a monic irreducible m, and their elements.
 * Elements are coordinate vectors in the power basis 1, theta, ..., theta^(d-1).
 * A FieldElement may carry a null field pointer, in which case it is a plain
 * rational; such elements combine freely with elements of any field.
 */

namespace wdwalk {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    /** K = Q[x]/(m); m is normalized to monic and must be irreducible. */
    static FieldPtr make(qp::QPoly m) {
        qp::normalize(m);
        if (qp::degree(m) < 1) throw ParseError("field polynomial must have degree >= 1");
        m = qp::monic(m);
        if (qp::degree(m) > 1 && !qp::is_irreducible(m))
            throw ReduciblePolynomial("field polynomial is reducible over the rationals");
        return FieldPtr(new NumberField(std::move(m)));
    }

    /** The rational field, presented as Q[x]/(x). */
    static FieldPtr rationals() { return make(qp::QPoly{Rational(0), Rational(1)}); }

    int degree() const { return qp::degree(min_poly_); }
    const qp::QPoly& min_poly() const { return min_poly_; }

    bool same_as(const NumberField& other) const {
        return this == &other || min_poly_ == other.min_poly_;
    }

private:
    explicit NumberField(qp::QPoly m) : min_poly_(std::move(m)) {}
    qp::QPoly min_poly_;
};

class FieldElement {
public:
    FieldElement() = default;
    /*implicit*/ FieldElement(const Rational& r) : coords_{r} { qp::normalize(coords_); }
    /*implicit*/ FieldElement(long n) : FieldElement(Rational(n)) {}
    /*implicit*/ FieldElement(int n) : FieldElement(Rational(n)) {}

    FieldElement(FieldPtr field, qp::QPoly coords) : field_(std::move(field)) {
        if (!field_) throw Error("FieldElement constructed with null field");
        coords_ = reduce(std::move(coords), field_->min_poly());
    }

    static FieldElement generator(const FieldPtr& field) {
        return FieldElement(field, qp::QPoly{Rational(0), Rational(1)});
    }

    const FieldPtr& field() const { return field_; }
    bool is_zero() const { return coords_.empty(); }
    bool is_one() const { return coords_.size() == 1 && coords_[0] == 1; }

    /** True when the element lies in the prime field Q. */
    bool is_rational() const { return coords_.size() <= 1; }

    Rational as_rational() const {
        if (!is_rational()) throw FieldMismatch("element does not lie in the rational field");
        return coords_.empty() ? Rational(0) : coords_[0];
    }

    /** Coordinates padded to the ambient degree (1 for plain rationals). */
    std::vector<Rational> coords() const {
        std::vector<Rational> out(field_ ? static_cast<std::size_t>(field_->degree()) : 1,
                                  Rational(0));
        for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = coords_[i];
        return out;
    }

    const qp::QPoly& poly() const { return coords_; }

    FieldElement operator-() const {
        FieldElement r(*this);
        for (auto& c : r.coords_) c = -c;
        return r;
    }

    friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
        auto [f, x, y] = align(a, b);
        return make_raw(f, qp::add(x, y));
    }
    friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
        auto [f, x, y] = align(a, b);
        return make_raw(f, qp::sub(x, y));
    }
    friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
        auto [f, x, y] = align(a, b);
        qp::QPoly prod = qp::mul(x, y);
        if (f) prod = reduce(std::move(prod), f->min_poly());
        return make_raw(f, std::move(prod));
    }
    friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
        return a * b.inverse();
    }

    FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
    FieldElement& operator-=(const FieldElement& b) { return *this = *this - b; }
    FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }
    FieldElement& operator/=(const FieldElement& b) { return *this = *this / b; }

    friend bool operator==(const FieldElement& a, const FieldElement& b) {
        auto [f, x, y] = align(a, b);
        (void)f;
        return x == y;
    }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    FieldElement inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero field element");
        if (!field_ || is_rational()) {
            FieldElement r(*this);
            r.coords_ = {1 / coords_[0]};
            return r;
        }
        auto [g, u, v] = qp::xgcd(coords_, field_->min_poly());
        (void)v;
        if (qp::degree(g) != 0)
            throw Error("field element shares a factor with the minimal polynomial");
        return make_raw(field_, reduce(qp::scale(u, 1 / g[0]), field_->min_poly()));
    }

    FieldElement pow(const Integer& e) const {
        if (e < 0) return inverse().pow(-e);
        FieldElement base(*this), acc(Rational(1));
        acc.field_ = field_;
        Integer k = e;
        while (k > 0) {
            if (mpz_odd_p(k.get_mpz_t())) acc *= base;
            base *= base;
            k >>= 1;
        }
        return acc;
    }
    FieldElement pow(long e) const { return pow(Integer(e)); }

    std::string to_string() const {
        std::ostringstream os;
        if (is_rational()) {
            os << rational_to_string(coords_.empty() ? Rational(0) : coords_[0]);
            return os.str();
        }
        os << "[";
        const auto cs = coords();
        for (std::size_t i = 0; i < cs.size(); ++i) {
            if (i) os << ", ";
            os << rational_to_string(cs[i]);
        }
        os << "]";
        return os.str();
    }

    /** Attach a field to a plain-rational element (no-op if already set). */
    FieldElement promoted(const FieldPtr& f) const {
        if (field_ || !f) return *this;
        FieldElement r(*this);
        r.field_ = f;
        return r;
    }

private:
    static qp::QPoly reduce(qp::QPoly coords, const qp::QPoly& m) {
        qp::normalize(coords);
        if (qp::degree(coords) >= qp::degree(m)) coords = qp::divmod(coords, m).second;
        return coords;
    }

    static FieldElement make_raw(FieldPtr f, qp::QPoly coords) {
        FieldElement r;
        r.field_ = std::move(f);
        r.coords_ = std::move(coords);
        qp::normalize(r.coords_);
        return r;
    }

    /** Common field of two operands; throws on a genuine mismatch. */
    static std::tuple<FieldPtr, qp::QPoly, qp::QPoly> align(const FieldElement& a,
                                                            const FieldElement& b) {
        FieldPtr f;
        if (a.field_ && b.field_) {
            if (!a.field_->same_as(*b.field_))
                throw FieldMismatch("elements of different number fields combined");
            f = a.field_;
        } else {
            f = a.field_ ? a.field_ : b.field_;
        }
        if (f) {
            if (!a.field_ && qp::degree(a.coords_) > 0)
                throw FieldMismatch("untyped non-rational element");
            if (!b.field_ && qp::degree(b.coords_) > 0)
                throw FieldMismatch("untyped non-rational element");
        }
        return {f, a.coords_, b.coords_};
    }

    FieldPtr field_;    // null => plain rational
    qp::QPoly coords_;  // normalized, degree < field degree when field_ set
};

inline FieldElement operator*(const Rational& a, const FieldElement& b) {
    return FieldElement(a) * b;
}

}  // namespace wdwalk

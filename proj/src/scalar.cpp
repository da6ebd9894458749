#include "powser/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace powser {

const char* backend_name(Backend be) {
    return be == Backend::exact ? "exact" : "float";
}

Backend backend_from_name(std::string_view name) {
    if (name == "exact") return Backend::exact;
    if (name == "float" || name == "float64") return Backend::float64;
    throw std::invalid_argument("unknown backend '" + std::string(name) +
                                "' (expected 'exact' or 'float')");
}

Scalar Scalar::zero(Backend be) { return from_int(0, be); }
Scalar Scalar::one(Backend be) { return from_int(1, be); }

Scalar Scalar::from_int(long n, Backend be) {
    if (be == Backend::exact) return Scalar{mpq_class(n)};
    return Scalar{static_cast<double>(n)};
}

Scalar Scalar::ratio(long num, long den, Backend be) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (be == Backend::exact) {
        mpq_class q(num, den);
        q.canonicalize();
        return Scalar{std::move(q)};
    }
    return Scalar{static_cast<double>(num) / static_cast<double>(den)};
}

Scalar Scalar::exact(mpq_class q) {
    q.canonicalize();
    return Scalar{std::move(q)};
}

Scalar Scalar::real(double d) { return Scalar{d}; }

Scalar Scalar::parse(const std::string& text, Backend be) {
    if (text.empty()) throw std::invalid_argument("empty scalar literal");
    const auto slash = text.find('/');
    const bool looks_rational =
        text.find_first_of(".eE") == std::string::npos || slash != std::string::npos;
    if (be == Backend::exact) {
        if (!looks_rational)
            throw std::invalid_argument("exact backend takes 'p/q' or integer literals, got '" +
                                        text + "'");
        mpq_class q;
        if (q.set_str(text, 10) != 0)
            throw std::invalid_argument("bad rational literal '" + text + "'");
        if (q.get_den() == 0) throw std::domain_error("zero denominator in '" + text + "'");
        q.canonicalize();
        return Scalar{std::move(q)};
    }
    if (slash != std::string::npos) {
        mpq_class q;
        if (q.set_str(text, 10) != 0 || q.get_den() == 0)
            throw std::invalid_argument("bad rational literal '" + text + "'");
        q.canonicalize();
        return Scalar{q.get_d()};
    }
    char* end = nullptr;
    const double d = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw std::invalid_argument("bad float literal '" + text + "'");
    return Scalar{d};
}

bool Scalar::is_zero() const {
    if (const auto* q = std::get_if<mpq_class>(&v_)) return sgn(*q) == 0;
    return std::get<double>(v_) == 0.0;
}

int Scalar::sign() const {
    if (const auto* q = std::get_if<mpq_class>(&v_)) return sgn(*q);
    const double d = std::get<double>(v_);
    return d > 0 ? 1 : d < 0 ? -1 : 0;
}

const mpq_class& Scalar::rational() const {
    if (const auto* q = std::get_if<mpq_class>(&v_)) return *q;
    throw std::logic_error("rational() on a float64 scalar");
}

double Scalar::value() const {
    if (const auto* d = std::get_if<double>(&v_)) return *d;
    throw std::logic_error("value() on an exact scalar");
}

double Scalar::approx() const {
    if (const auto* q = std::get_if<mpq_class>(&v_)) return q->get_d();
    return std::get<double>(v_);
}

std::string Scalar::str() const {
    if (const auto* q = std::get_if<mpq_class>(&v_)) {
        if (q->get_den() == 1) return q->get_num().get_str();
        return q->get_num().get_str() + "/" + q->get_den().get_str();
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(v_));
    return buf;
}

Scalar Scalar::operator-() const {
    if (const auto* q = std::get_if<mpq_class>(&v_)) return Scalar{mpq_class(-*q)};
    return Scalar{-std::get<double>(v_)};
}

Scalar& Scalar::operator+=(const Scalar& o) {
    check_same(o);
    if (auto* q = std::get_if<mpq_class>(&v_)) *q += std::get<mpq_class>(o.v_);
    else std::get<double>(v_) += std::get<double>(o.v_);
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    check_same(o);
    if (auto* q = std::get_if<mpq_class>(&v_)) *q -= std::get<mpq_class>(o.v_);
    else std::get<double>(v_) -= std::get<double>(o.v_);
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    check_same(o);
    if (auto* q = std::get_if<mpq_class>(&v_)) *q *= std::get<mpq_class>(o.v_);
    else std::get<double>(v_) *= std::get<double>(o.v_);
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    check_same(o);
    if (auto* q = std::get_if<mpq_class>(&v_)) {
        const auto& d = std::get<mpq_class>(o.v_);
        if (sgn(d) == 0) throw std::domain_error("division by zero");
        *q /= d;
    } else {
        std::get<double>(v_) /= std::get<double>(o.v_);
    }
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
    a.check_same(b);
    if (const auto* q = std::get_if<mpq_class>(&a.v_))
        return *q == std::get<mpq_class>(b.v_);
    return std::get<double>(a.v_) == std::get<double>(b.v_);
}

bool operator<(const Scalar& a, const Scalar& b) {
    a.check_same(b);
    if (const auto* q = std::get_if<mpq_class>(&a.v_))
        return *q < std::get<mpq_class>(b.v_);
    return std::get<double>(a.v_) < std::get<double>(b.v_);
}

Scalar Scalar::abs() const {
    return sign() < 0 ? -*this : *this;
}

}  // namespace powser

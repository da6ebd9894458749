#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace powser {

// Coefficient backend. Exact rationals never round; float64 is IEEE double.
// A value's backend is fixed at construction and operations refuse to mix
// backends (no silent coercion).
enum class Backend { exact, float64 };

const char* backend_name(Backend be);
Backend backend_from_name(std::string_view name);

struct BackendMismatch : std::logic_error {
    BackendMismatch()
        : std::logic_error("operands use different scalar backends") {}
};

/// Series coefficient: exact rational (lowest terms, positive denominator)
/// or a 64-bit float. Immutable value type.
class Scalar {
public:
    Scalar() : v_(mpq_class(0)) {}

    static Scalar zero(Backend be);
    static Scalar one(Backend be);
    static Scalar from_int(long n, Backend be);
    static Scalar ratio(long num, long den, Backend be);
    static Scalar exact(mpq_class q);
    static Scalar real(double d);

    // Accepts "p/q" and integer literals on both backends; plain decimal
    // text only on float64.
    static Scalar parse(const std::string& text, Backend be);

    Backend backend() const {
        return std::holds_alternative<mpq_class>(v_) ? Backend::exact
                                                     : Backend::float64;
    }
    bool is_zero() const;
    int sign() const;

    const mpq_class& rational() const;  // exact backend only
    double value() const;               // float64 backend only
    double approx() const;              // lossy view of either backend

    // Lossless round-trip text: "p/q" (or plain integer) for exact,
    // 17 significant digits for float64.
    std::string str() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
    friend bool operator<(const Scalar& a, const Scalar& b);
    friend bool operator<=(const Scalar& a, const Scalar& b) { return a < b || a == b; }

    Scalar abs() const;

private:
    explicit Scalar(std::variant<mpq_class, double> v) : v_(std::move(v)) {}
    void check_same(const Scalar& o) const {
        if (backend() != o.backend()) throw BackendMismatch{};
    }
    std::variant<mpq_class, double> v_;
};

}  // namespace powser

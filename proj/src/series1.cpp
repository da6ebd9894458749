#include "powser/series1.hpp"

#include <stdexcept>
#include <string>

namespace powser {

Series1::Series1(std::vector<Scalar> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw std::invalid_argument("series needs at least the constant term");
    be_ = c_.front().backend();
    for (const auto& v : c_)
        if (v.backend() != be_) throw BackendMismatch{};
}

Series1 Series1::zero(Backend be, int order) {
    if (order < 0) throw std::invalid_argument("negative series order");
    return Series1(std::vector<Scalar>(order + 1, Scalar::zero(be)));
}

Series1 Series1::one(Backend be, int order) {
    auto s = zero(be, order);
    s.c_[0] = Scalar::one(be);
    return s;
}

Series1 Series1::constant(const Scalar& c, int order) {
    auto s = zero(c.backend(), order);
    s.c_[0] = c;
    return s;
}

const Scalar& Series1::at(int i) const {
    if (i < 0 || i > order())
        throw std::out_of_range("coefficient index " + std::to_string(i) +
                                " outside valid order " + std::to_string(order()));
    return c_[static_cast<std::size_t>(i)];
}

Series1 Series1::truncated(int new_order) const {
    if (new_order < 0 || new_order > order())
        throw std::out_of_range("truncation order " + std::to_string(new_order) +
                                " outside valid order " + std::to_string(order()));
    return Series1(std::vector<Scalar>(c_.begin(), c_.begin() + new_order + 1));
}

Series1 mul1(const Series1& a, const Series1& b) {
    if (a.backend() != b.backend()) throw BackendMismatch{};
    const int n = std::min(a.order(), b.order());
    std::vector<Scalar> c(n + 1, Scalar::zero(a.backend()));
    for (int j = 0; j <= n; ++j) {
        Scalar acc = Scalar::zero(a.backend());
        for (int i = 0; i <= j; ++i) acc += a.at(i) * b.at(j - i);
        c[static_cast<std::size_t>(j)] = std::move(acc);
    }
    return Series1(std::move(c));
}

Series1 pow1(const Series1& a, int n) {
    if (n < 0) throw std::invalid_argument("negative power");
    if (n == 0) return Series1::one(a.backend(), a.order());
    Series1 r = a;
    for (int k = 1; k < n; ++k) r = mul1(r, a);
    return r;
}

Series1 diff1(const Series1& a, int m) {
    if (m < 1) throw std::invalid_argument("derivative order must be >= 1");
    if (a.order() < m)
        throw std::invalid_argument("series order " + std::to_string(a.order()) +
                                    " too small for derivative order " + std::to_string(m));
    const int n = a.order() - m;
    std::vector<Scalar> c;
    c.reserve(n + 1);
    for (int s = 0; s <= n; ++s) {
        long f = 1;
        for (int t = 1; t <= m; ++t) f *= s + t;  // (s+m)!/s!
        c.push_back(Scalar::from_int(f, a.backend()) * a.at(s + m));
    }
    return Series1(std::move(c));
}

Series1 shift_monomial(const Series1& a, int d) {
    if (d < 0) throw std::invalid_argument("negative monomial degree");
    std::vector<Scalar> c(a.order() + d + 1, Scalar::zero(a.backend()));
    for (int i = 0; i <= a.order(); ++i) c[static_cast<std::size_t>(i + d)] = a.at(i);
    return Series1(std::move(c));
}

Series1 add1(const Series1& a, const Series1& b) {
    if (a.backend() != b.backend()) throw BackendMismatch{};
    const int n = std::min(a.order(), b.order());
    std::vector<Scalar> c;
    c.reserve(n + 1);
    for (int i = 0; i <= n; ++i) c.push_back(a.at(i) + b.at(i));
    return Series1(std::move(c));
}

Series1 sub1(const Series1& a, const Series1& b) {
    if (a.backend() != b.backend()) throw BackendMismatch{};
    const int n = std::min(a.order(), b.order());
    std::vector<Scalar> c;
    c.reserve(n + 1);
    for (int i = 0; i <= n; ++i) c.push_back(a.at(i) - b.at(i));
    return Series1(std::move(c));
}

Series1 scale1(const Series1& a, const Scalar& s) {
    if (a.backend() != s.backend()) throw BackendMismatch{};
    std::vector<Scalar> c;
    c.reserve(a.order() + 1);
    for (int i = 0; i <= a.order(); ++i) c.push_back(a.at(i) * s);
    return Series1(std::move(c));
}

Scalar eval1(const Series1& a, const Scalar& x) {
    if (a.backend() != x.backend()) throw BackendMismatch{};
    Scalar acc = a.at(a.order());
    for (int i = a.order() - 1; i >= 0; --i) acc = acc * x + a.at(i);
    return acc;
}

double eval1(const Series1& a, double x) {
    double acc = a.at(a.order()).approx();
    for (int i = a.order() - 1; i >= 0; --i) acc = acc * x + a.at(i).approx();
    return acc;
}

}  // namespace powser

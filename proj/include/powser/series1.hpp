#pragma once

#include "powser/scalar.hpp"

#include <vector>

namespace powser {

/// Dense truncated power series in one variable. `order()` is the highest
/// index whose coefficient is meaningful given how the series was produced;
/// reading past it throws instead of returning an implicit zero.
///
/// Valid-order bookkeeping is carried by the declared order itself:
/// products return min(order(a), order(b)), an m-th derivative drops the
/// order by m, multiplying by x^d raises it by d.
class Series1 {
public:
    explicit Series1(std::vector<Scalar> coeffs);

    static Series1 zero(Backend be, int order);
    static Series1 one(Backend be, int order);
    static Series1 constant(const Scalar& c, int order);

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    Backend backend() const noexcept { return be_; }

    const Scalar& at(int i) const;
    const std::vector<Scalar>& coeffs() const noexcept { return c_; }

    Series1 truncated(int new_order) const;

private:
    std::vector<Scalar> c_;
    Backend be_;
};

Series1 mul1(const Series1& a, const Series1& b);
Series1 pow1(const Series1& a, int n);
Series1 diff1(const Series1& a, int m);
Series1 shift_monomial(const Series1& a, int d);
Series1 add1(const Series1& a, const Series1& b);
Series1 sub1(const Series1& a, const Series1& b);
Series1 scale1(const Series1& a, const Scalar& s);

Scalar eval1(const Series1& a, const Scalar& x);
double eval1(const Series1& a, double x);

}  // namespace powser

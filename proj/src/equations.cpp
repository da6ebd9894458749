#include "powser/equations.hpp"

namespace powser::equations {

namespace {

using Term1 = Term<1>;

// Linear combination c0 + ca*alpha + cb*beta + cg*gamma + cd*delta.
Scalar combo(long c0, long ca, long cb, long cg, long cd, const Scalar& a, const Scalar& b,
             const Scalar& g, const Scalar& d) {
    const Backend be = a.backend();
    Scalar v = Scalar::from_int(c0, be);
    v += Scalar::from_int(ca, be) * a;
    v += Scalar::from_int(cb, be) * b;
    v += Scalar::from_int(cg, be) * g;
    v += Scalar::from_int(cd, be) * d;
    return v;
}

// Adds a term with integer-degree polynomial (degree -> coefficient),
// dropping zero coefficients so parameter terms vanish when the parameters
// do. Terms whose polynomial vanishes entirely are not added.
void push_term(PolyDiffExpression<1>& e, std::vector<std::pair<int, Scalar>> poly,
               std::vector<Term1::Factor> factors) {
    Term1 t;
    for (auto& [deg, c] : poly)
        if (!c.is_zero()) t.poly.emplace(std::array<int, 1>{deg}, std::move(c));
    if (t.poly.empty()) return;
    t.factors = std::move(factors);
    e.terms.push_back(std::move(t));
}

}  // namespace

PolyDiffExpression<1> pvi_shifted(const Scalar& alpha, const Scalar& beta, const Scalar& gamma,
                                  const Scalar& delta) {
    const Backend be = alpha.backend();
    if (beta.backend() != be || gamma.backend() != be || delta.backend() != be)
        throw BackendMismatch{};
    const auto in = [be](long n) { return Scalar::from_int(n, be); };
    const auto prm = [&](long c0, long ca, long cb, long cg, long cd) {
        return combo(c0, ca, cb, cg, cd, alpha, beta, gamma, delta);
    };
    using F = Term1::Factor;
    const F y3{"y", {0}, 3};
    const F y2{"y", {0}, 2};
    const F y1{"y", {0}, 1};
    const F y4{"y", {0}, 4};
    const F y5{"y", {0}, 5};
    const F y6{"y", {0}, 6};
    const F p1{"y", {1}, 1};
    const F p2{"y", {1}, 2};
    const F ypp{"y", {2}, 1};

    PolyDiffExpression<1> e;
    // Left-hand side.
    push_term(e, {{4, in(2)}, {3, in(-12)}, {2, in(26)}, {1, in(-24)}, {0, in(8)}}, {y3, ypp});
    push_term(e, {{5, in(-2)}, {4, in(12)}, {3, in(-26)}, {2, in(24)}, {1, in(-8)}}, {y2, ypp});
    push_term(e, {{5, in(2)}, {4, in(-14)}, {3, in(38)}, {2, in(-50)}, {1, in(32)}, {0, in(-8)}},
              {y1, ypp});
    // Right-hand side, negated.
    push_term(e, {{4, in(-3)}, {3, in(18)}, {2, in(-39)}, {1, in(36)}, {0, in(-12)}}, {y2, p2});
    push_term(e, {{5, in(2)}, {4, in(-12)}, {3, in(26)}, {2, in(-24)}, {1, in(8)}}, {y1, p2});
    push_term(e, {{5, in(-1)}, {4, in(7)}, {3, in(-19)}, {2, in(25)}, {1, in(-16)}, {0, in(4)}},
              {p2});
    push_term(e, {{3, in(4)}, {2, in(-18)}, {1, in(26)}, {0, in(-12)}}, {y3, p1});
    push_term(e, {{4, in(2)}, {3, in(-14)}, {2, in(36)}, {1, in(-40)}, {0, in(16)}}, {y2, p1});
    push_term(e, {{4, in(-2)}, {3, in(10)}, {2, in(-18)}, {1, in(14)}, {0, in(-4)}}, {y1, p1});
    push_term(e, {{0, -prm(0, 2, 0, 0, 0)}}, {y6});
    push_term(e, {{1, -prm(0, -4, 0, 0, 0)}}, {y5});
    push_term(e,
              {{2, -prm(0, 2, 0, 0, 2)},
               {1, -prm(0, 4, 2, 2, -6)},
               {0, -prm(0, -4, -2, -4, 4)}},
              {y4});
    push_term(e,
              {{2, -prm(0, -4, -4, -4, -4)},
               {1, -prm(0, 4, 4, 12, 12)},
               {0, -prm(0, 0, 0, -8, -8)}},
              {y3});
    push_term(e,
              {{3, -prm(0, 0, 2, 2, 0)},
               {2, -prm(0, 2, 2, -8, 2)},
               {1, -prm(0, -4, -8, 10, -6)},
               {0, -prm(0, 2, 4, -4, 4)}},
              {y2});
    push_term(e, {{3, -prm(0, 0, -4, 0, 0)}, {2, -prm(0, 0, 8, 0, 0)}, {1, -prm(0, 0, -4, 0, 0)}},
              {y1});
    push_term(e,
              {{3, -prm(0, 0, 2, 0, 0)},
               {2, -prm(0, 0, -6, 0, 0)},
               {1, -prm(0, 0, 6, 0, 0)},
               {0, -prm(0, 0, -2, 0, 0)}},
              {});
    return e;
}

PolyDiffExpression<4> ns_momentum(int axis, const Scalar& rho, const Scalar& nu) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
    if (rho.backend() != nu.backend()) throw BackendMismatch{};
    if (rho.is_zero()) throw std::invalid_argument("rho must be nonzero");
    const Backend be = rho.backend();
    const char* vel[3] = {"u", "v", "w"};
    const std::string target = vel[axis];

    using T = Term<4>;
    const std::array<int, 4> zero{};
    const auto one = Scalar::one(be);
    PolyDiffExpression<4> e;

    for (int conv = 0; conv < 3; ++conv) {
        T t;
        std::array<int, 4> d{};
        d[conv] = 1;
        t.poly.emplace(zero, one);
        t.factors.push_back({vel[conv], {}, 1});
        t.factors.push_back({target, d, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // time derivative
        t.poly.emplace(zero, one);
        t.factors.push_back({target, {0, 0, 0, 1}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // pressure gradient
        std::array<int, 4> d{};
        d[axis] = 1;
        t.poly.emplace(zero, one / rho);
        t.factors.push_back({"P", d, 1});
        e.terms.push_back(std::move(t));
    }
    for (int lap = 0; lap < 3; ++lap) {
        T t;
        std::array<int, 4> d{};
        d[lap] = 2;
        t.poly.emplace(zero, -nu);
        t.factors.push_back({target, d, 1});
        e.terms.push_back(std::move(t));
    }
    return e;
}

PolyDiffExpression<4> ns_continuity(Backend be) {
    PolyDiffExpression<4> e;
    const std::array<int, 4> zero{};
    const char* vel[3] = {"u", "v", "w"};
    for (int ax = 0; ax < 3; ++ax) {
        Term<4> t;
        std::array<int, 4> d{};
        d[ax] = 1;
        t.poly.emplace(zero, Scalar::one(be));
        t.factors.push_back({vel[ax], d, 1});
        e.terms.push_back(std::move(t));
    }
    return e;
}

PolyDiffExpression<3> prandtl_momentum(const Scalar& nu) {
    const Backend be = nu.backend();
    const std::array<int, 3> zero{};
    const auto one = Scalar::one(be);
    using T = Term<3>;
    PolyDiffExpression<3> e;
    {
        T t;  // u u_x
        t.poly.emplace(zero, one);
        t.factors.push_back({"u", {}, 1});
        t.factors.push_back({"u", {1, 0, 0}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // v u_y
        t.poly.emplace(zero, one);
        t.factors.push_back({"v", {}, 1});
        t.factors.push_back({"u", {0, 1, 0}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // u_t
        t.poly.emplace(zero, one);
        t.factors.push_back({"u", {0, 0, 1}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // -U_t
        t.poly.emplace(zero, -one);
        t.factors.push_back({"U", {0, 0, 1}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // -U U_x
        t.poly.emplace(zero, -one);
        t.factors.push_back({"U", {}, 1});
        t.factors.push_back({"U", {1, 0, 0}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        T t;  // -nu u_yy
        t.poly.emplace(zero, -nu);
        t.factors.push_back({"u", {0, 2, 0}, 1});
        e.terms.push_back(std::move(t));
    }
    return e;
}

PolyDiffExpression<3> prandtl_continuity(Backend be) {
    PolyDiffExpression<3> e;
    const std::array<int, 3> zero{};
    {
        Term<3> t;
        t.poly.emplace(zero, Scalar::one(be));
        t.factors.push_back({"u", {1, 0, 0}, 1});
        e.terms.push_back(std::move(t));
    }
    {
        Term<3> t;
        t.poly.emplace(zero, Scalar::one(be));
        t.factors.push_back({"v", {0, 1, 0}, 1});
        e.terms.push_back(std::move(t));
    }
    return e;
}

}  // namespace powser::equations

#pragma once

#include "powser/scalar.hpp"
#include "powser/series1.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace powser {

template <int K>
std::array<std::string, K> default_axes();

template <> inline std::array<std::string, 1> default_axes<1>() { return {"x"}; }
template <> inline std::array<std::string, 2> default_axes<2>() { return {"x", "t"}; }
template <> inline std::array<std::string, 3> default_axes<3>() { return {"x", "y", "t"}; }
template <> inline std::array<std::string, 4> default_axes<4>() { return {"x", "y", "z", "t"}; }

/// Dense truncated power series in K variables with per-axis degree caps.
/// Every entry within the caps is defined (explicit zeros allowed); reads
/// beyond a cap throw. Caps double as the per-axis valid order and follow
/// the same arithmetic as Series1 orders under mulk/diffk/shiftk.
template <int K>
class SeriesK {
public:
    using Index = std::array<int, K>;
    using ScalarPoint = std::array<Scalar, K>;
    using DoublePoint = std::array<double, K>;

    SeriesK(Backend be, Index caps, std::array<std::string, K> axes = default_axes<K>())
        : caps_(caps), axes_(std::move(axes)), be_(be) {
        std::size_t n = 1;
        for (int ax = 0; ax < K; ++ax) {
            if (caps_[ax] < 0) throw std::invalid_argument("negative axis cap");
            n *= static_cast<std::size_t>(caps_[ax]) + 1;
        }
        c_.assign(n, Scalar::zero(be_));
    }

    static SeriesK zero(Backend be, Index caps,
                        std::array<std::string, K> axes = default_axes<K>()) {
        return SeriesK(be, caps, std::move(axes));
    }

    Backend backend() const noexcept { return be_; }
    const Index& caps() const noexcept { return caps_; }
    const std::array<std::string, K>& axes() const noexcept { return axes_; }
    std::size_t size() const noexcept { return c_.size(); }

    bool in_range(const Index& ix) const noexcept {
        for (int ax = 0; ax < K; ++ax)
            if (ix[ax] < 0 || ix[ax] > caps_[ax]) return false;
        return true;
    }

    const Scalar& at(const Index& ix) const {
        check(ix);
        return c_[flatten(ix)];
    }

    void set(const Index& ix, Scalar v) {
        check(ix);
        if (v.backend() != be_) throw BackendMismatch{};
        c_[flatten(ix)] = std::move(v);
    }

    std::size_t flatten(const Index& ix) const noexcept {
        std::size_t f = 0;
        for (int ax = 0; ax < K; ++ax)
            f = f * (static_cast<std::size_t>(caps_[ax]) + 1) + static_cast<std::size_t>(ix[ax]);
        return f;
    }

    const Scalar& flat(std::size_t f) const { return c_.at(f); }

    template <typename Fn>
    void for_each_index(Fn&& fn) const {
        Index ix{};
        for (;;) {
            fn(static_cast<const Index&>(ix));
            int ax = K - 1;
            while (ax >= 0) {
                if (++ix[ax] <= caps_[ax]) break;
                ix[ax] = 0;
                --ax;
            }
            if (ax < 0) return;
        }
    }

private:
    void check(const Index& ix) const {
        if (!in_range(ix)) {
            std::string msg = "index (";
            for (int ax = 0; ax < K; ++ax)
                msg += std::to_string(ix[ax]) + (ax + 1 < K ? "," : ")");
            msg += " outside caps (";
            for (int ax = 0; ax < K; ++ax)
                msg += std::to_string(caps_[ax]) + (ax + 1 < K ? "," : ")");
            throw std::out_of_range(msg);
        }
    }

    Index caps_;
    std::array<std::string, K> axes_;
    std::vector<Scalar> c_;
    Backend be_;
};

// Iterates all indices of an arbitrary rectangular cap box.
template <int K, typename Fn>
void for_each_index(const std::array<int, K>& caps, Fn&& fn) {
    std::array<int, K> ix{};
    for (int ax = 0; ax < K; ++ax)
        if (caps[ax] < 0) return;  // empty box
    for (;;) {
        fn(static_cast<const std::array<int, K>&>(ix));
        int ax = K - 1;
        while (ax >= 0) {
            if (++ix[ax] <= caps[ax]) break;
            ix[ax] = 0;
            --ax;
        }
        if (ax < 0) return;
    }
}

template <int K>
SeriesK<K> mulk(const SeriesK<K>& a, const SeriesK<K>& b) {
    if (a.backend() != b.backend()) throw BackendMismatch{};
    std::array<int, K> caps;
    for (int ax = 0; ax < K; ++ax) caps[ax] = std::min(a.caps()[ax], b.caps()[ax]);
    SeriesK<K> r(a.backend(), caps, a.axes());
    r.for_each_index([&](const std::array<int, K>& n) {
        Scalar acc = Scalar::zero(a.backend());
        std::array<int, K> lo, hi;
        for (int ax = 0; ax < K; ++ax) {
            lo[ax] = std::max(0, n[ax] - b.caps()[ax]);
            hi[ax] = std::min(n[ax], a.caps()[ax]);
            if (lo[ax] > hi[ax]) { r.set(n, std::move(acc)); return; }
        }
        std::array<int, K> span;
        for (int ax = 0; ax < K; ++ax) span[ax] = hi[ax] - lo[ax];
        for_each_index<K>(span, [&](const std::array<int, K>& off) {
            std::array<int, K> m, nm;
            for (int ax = 0; ax < K; ++ax) {
                m[ax] = lo[ax] + off[ax];
                nm[ax] = n[ax] - m[ax];
            }
            acc += a.at(m) * b.at(nm);
        });
        r.set(n, std::move(acc));
    });
    return r;
}

template <int K>
SeriesK<K> diffk(const SeriesK<K>& a, int axis, int m) {
    if (axis < 0 || axis >= K) throw std::invalid_argument("axis out of range");
    if (m < 1) throw std::invalid_argument("derivative order must be >= 1");
    if (a.caps()[axis] < m)
        throw std::invalid_argument("axis cap " + std::to_string(a.caps()[axis]) +
                                    " too small for derivative order " + std::to_string(m));
    auto caps = a.caps();
    caps[axis] -= m;
    SeriesK<K> r(a.backend(), caps, a.axes());
    r.for_each_index([&](const std::array<int, K>& n) {
        long f = 1;
        for (int t = 1; t <= m; ++t) f *= n[axis] + t;
        auto src = n;
        src[axis] += m;
        r.set(n, Scalar::from_int(f, a.backend()) * a.at(src));
    });
    return r;
}

// Multi-order derivative: one order per axis (0 = untouched axis).
template <int K>
SeriesK<K> diffk(const SeriesK<K>& a, const typename SeriesK<K>::Index& orders) {
    SeriesK<K> r = a;
    for (int ax = 0; ax < K; ++ax)
        if (orders[ax] > 0) r = diffk(r, ax, orders[ax]);
    return r;
}

template <int K>
SeriesK<K> shiftk(const SeriesK<K>& a, const typename SeriesK<K>::Index& d) {
    auto caps = a.caps();
    for (int ax = 0; ax < K; ++ax) {
        if (d[ax] < 0) throw std::invalid_argument("negative monomial degree");
        caps[ax] += d[ax];
    }
    SeriesK<K> r(a.backend(), caps, a.axes());
    a.for_each_index([&](const std::array<int, K>& m) {
        auto dst = m;
        for (int ax = 0; ax < K; ++ax) dst[ax] += d[ax];
        r.set(dst, a.at(m));
    });
    return r;
}

template <int K>
SeriesK<K> addk(const SeriesK<K>& a, const SeriesK<K>& b) {
    if (a.backend() != b.backend()) throw BackendMismatch{};
    std::array<int, K> caps;
    for (int ax = 0; ax < K; ++ax) caps[ax] = std::min(a.caps()[ax], b.caps()[ax]);
    SeriesK<K> r(a.backend(), caps, a.axes());
    r.for_each_index([&](const std::array<int, K>& n) { r.set(n, a.at(n) + b.at(n)); });
    return r;
}

template <int K>
SeriesK<K> subk(const SeriesK<K>& a, const SeriesK<K>& b) {
    if (a.backend() != b.backend()) throw BackendMismatch{};
    std::array<int, K> caps;
    for (int ax = 0; ax < K; ++ax) caps[ax] = std::min(a.caps()[ax], b.caps()[ax]);
    SeriesK<K> r(a.backend(), caps, a.axes());
    r.for_each_index([&](const std::array<int, K>& n) { r.set(n, a.at(n) - b.at(n)); });
    return r;
}

template <int K>
SeriesK<K> scalek(const SeriesK<K>& a, const Scalar& s) {
    if (a.backend() != s.backend()) throw BackendMismatch{};
    SeriesK<K> r(a.backend(), a.caps(), a.axes());
    r.for_each_index([&](const std::array<int, K>& n) { r.set(n, a.at(n) * s); });
    return r;
}

template <int K>
SeriesK<K> truncatek(const SeriesK<K>& a, const typename SeriesK<K>::Index& caps) {
    for (int ax = 0; ax < K; ++ax)
        if (caps[ax] > a.caps()[ax])
            throw std::out_of_range("truncation caps exceed valid caps");
    SeriesK<K> r(a.backend(), caps, a.axes());
    r.for_each_index([&](const std::array<int, K>& n) { r.set(n, a.at(n)); });
    return r;
}

// Nested Horner evaluation, innermost axis first.
namespace detail {
template <int K, typename X>
auto evalk_rec(const SeriesK<K>& a, const std::array<X, K>& at, std::array<int, K>& ix, int axis)
    -> X {
    if (axis == K) {
        if constexpr (std::is_same_v<X, double>)
            return a.at(ix).approx();
        else
            return a.at(ix);
    }
    const int cap = a.caps()[axis];
    ix[axis] = cap;
    X acc = evalk_rec<K, X>(a, at, ix, axis + 1);
    for (int i = cap - 1; i >= 0; --i) {
        ix[axis] = i;
        acc = acc * at[axis] + evalk_rec<K, X>(a, at, ix, axis + 1);
    }
    return acc;
}
}  // namespace detail

template <int K>
Scalar evalk(const SeriesK<K>& a, const typename SeriesK<K>::ScalarPoint& at) {
    for (const auto& x : at)
        if (x.backend() != a.backend()) throw BackendMismatch{};
    std::array<int, K> ix{};
    return detail::evalk_rec<K, Scalar>(a, at, ix, 0);
}

template <int K>
double evalk(const SeriesK<K>& a, const typename SeriesK<K>::DoublePoint& at) {
    std::array<int, K> ix{};
    return detail::evalk_rec<K, double>(a, at, ix, 0);
}

inline SeriesK<1> lift(const Series1& a) {
    SeriesK<1> r(a.backend(), {a.order()});
    for (int i = 0; i <= a.order(); ++i) r.set({i}, a.at(i));
    return r;
}

inline Series1 lower(const SeriesK<1>& a) {
    std::vector<Scalar> c;
    c.reserve(static_cast<std::size_t>(a.caps()[0]) + 1);
    for (int i = 0; i <= a.caps()[0]; ++i) c.push_back(a.at({i}));
    return Series1(std::move(c));
}

}  // namespace powser

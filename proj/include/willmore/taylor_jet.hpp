#pragma once

// Truncated Taylor-series arithmetic of fixed order. A Jet carries the Taylor
// coefficients c_k = f^(k)(a)/k! of a function about an expansion point; the
// usual arithmetic and sin/cos propagate derivatives exactly, which is how the
// preset curves obtain their closed-form parameter derivatives.

#include <array>
#include <cmath>
#include <cstddef>

namespace willmore {

template <int Order>
struct Jet {
    std::array<double, Order + 1> c{};

    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    // The independent variable: value v, unit first derivative.
    static Jet variable(double v) {
        Jet j;
        j.c[0] = v;
        if constexpr (Order >= 1) j.c[1] = 1.0;
        return j;
    }

    double value() const { return c[0]; }

    // k-th derivative = c_k * k!
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return c[static_cast<size_t>(k)] * f;
    }

    Jet operator+(const Jet& o) const {
        Jet r;
        for (int k = 0; k <= Order; ++k) r.c[k] = c[k] + o.c[k];
        return r;
    }
    Jet operator-(const Jet& o) const {
        Jet r;
        for (int k = 0; k <= Order; ++k) r.c[k] = c[k] - o.c[k];
        return r;
    }
    Jet operator*(const Jet& o) const {
        Jet r;
        for (int k = 0; k <= Order; ++k) {
            double acc = 0.0;
            for (int i = 0; i <= k; ++i) acc += c[i] * o.c[k - i];
            r.c[k] = acc;
        }
        return r;
    }
    Jet operator*(double s) const {
        Jet r;
        for (int k = 0; k <= Order; ++k) r.c[k] = c[k] * s;
        return r;
    }
    Jet operator+(double s) const {
        Jet r = *this;
        r.c[0] += s;
        return r;
    }
};

template <int Order>
Jet<Order> operator*(double s, const Jet<Order>& j) {
    return j * s;
}
template <int Order>
Jet<Order> operator+(double s, const Jet<Order>& j) {
    return j + s;
}

// sin/cos propagate by the recurrences s' = u' cos(u), c' = -u' sin(u):
//   k s_k = sum_{i=1..k} i u_i c_{k-i},   k c_k = -sum_{i=1..k} i u_i s_{k-i}.
template <int Order>
void sincos(const Jet<Order>& u, Jet<Order>& s, Jet<Order>& c) {
    s.c[0] = std::sin(u.c[0]);
    c.c[0] = std::cos(u.c[0]);
    for (int k = 1; k <= Order; ++k) {
        double sa = 0.0, ca = 0.0;
        for (int i = 1; i <= k; ++i) {
            sa += i * u.c[i] * c.c[k - i];
            ca -= i * u.c[i] * s.c[k - i];
        }
        s.c[k] = sa / k;
        c.c[k] = ca / k;
    }
}

template <int Order>
Jet<Order> sin(const Jet<Order>& u) {
    Jet<Order> s, c;
    sincos(u, s, c);
    return s;
}
template <int Order>
Jet<Order> cos(const Jet<Order>& u) {
    Jet<Order> s, c;
    sincos(u, s, c);
    return c;
}

}  // namespace willmore

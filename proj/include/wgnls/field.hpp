#pragma once

#include <complex>
#include <vector>

#include "wgnls/errors.hpp"
#include "wgnls/numerics.hpp"

namespace wgnls {

/// Representation tag. Field1 uses Nodal/Modal only; Field2 additionally has
/// the intermediate ModalX2 state (sine coefficients in x2, nodal in x1).
enum class Rep { Nodal, ModalX2, Modal };

/// Complex state on the x1 grid.
struct Field1 {
    std::vector<cdouble> v;
    Rep rep = Rep::Nodal;

    Field1() = default;
    explicit Field1(int n, Rep r = Rep::Nodal) : v(n), rep(r) {}
    int size() const { return static_cast<int>(v.size()); }
    cdouble& operator[](int i) { return v[i]; }
    const cdouble& operator[](int i) const { return v[i]; }
};

/// Complex state on the strip grid, stored row-major in x1:
/// value(i1, j2) sits at v[i1*n2 + j2].
struct Field2 {
    int n1 = 0;
    int n2 = 0;
    std::vector<cdouble> v;
    Rep rep = Rep::Nodal;

    Field2() = default;
    Field2(int n1_, int n2_, Rep r = Rep::Nodal) : n1(n1_), n2(n2_), v(static_cast<std::size_t>(n1_) * n2_), rep(r) {}
    cdouble& at(int i, int j) { return v[static_cast<std::size_t>(i) * n2 + j]; }
    const cdouble& at(int i, int j) const { return v[static_cast<std::size_t>(i) * n2 + j]; }
    std::size_t size() const { return v.size(); }
};

inline void check_same_shape(const Field2& a, const Field2& b) {
    if (a.n1 != b.n1 || a.n2 != b.n2)
        throw SizeMismatch("Field2 shape mismatch");
}

// y += a*x, elementwise. Shapes must match.
inline void add_scaled(Field2& y, cdouble a, const Field2& x) {
    check_same_shape(y, x);
    for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
}

inline void add_scaled(Field1& y, cdouble a, const Field1& x) {
    if (y.size() != x.size()) throw SizeMismatch("Field1 size mismatch");
    for (std::size_t i = 0; i < y.v.size(); ++i) y.v[i] += a * x.v[i];
}

template <typename FieldT>
bool all_finite(const FieldT& f) {
    for (const auto& z : f.v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

} // namespace wgnls

#include "wgnls/random_fields.hpp"

#include <cmath>

namespace wgnls {

Field1 random_field1(const SpectralCore& core, Rng& rng, double s) {
    const int n1 = core.grid().n1;
    Field1 f(n1, Rep::Modal);
    for (int i = 0; i < n1; ++i) {
        const int k = (i <= n1 / 2) ? i : i - n1;
        f[i] = rng.cgaussian() * std::pow(1.0 + static_cast<double>(k) * k, -s);
    }
    f[n1 / 2] = 0.0;
    return f;
}

Field2 random_field2(const SpectralCore& core, Rng& rng, double s) {
    const int n1 = core.grid().n1;
    const int n2 = core.grid().n2;
    Field2 f(n1, n2, Rep::Modal);
    for (int i = 0; i < n1; ++i) {
        const int k = (i <= n1 / 2) ? i : i - n1;
        for (int j = 0; j < n2; ++j) {
            const double damp = std::pow(1.0 + static_cast<double>(k) * k + core.basis().mu(j + 1), -s);
            f.at(i, j) = rng.cgaussian() * damp;
        }
    }
    for (int j = 0; j < n2; ++j) f.at(n1 / 2, j) = 0.0;
    return f;
}

} // namespace wgnls

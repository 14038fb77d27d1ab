#pragma once

#include "wgnls/errors.hpp"
#include "wgnls/numerics.hpp"

namespace wgnls {

/// Tensor grid on the strip S = M x (-1,1):
///   x1 uniform periodic nodes on [0, length1),
///   x2 interior Dirichlet nodes x2_j = -1 + 2j/(n2+1), j = 1..n2.
struct StripGrid {
    int n1 = 0;
    double length1 = kTwoPi;
    int n2 = 0;

    double dx1() const { return length1 / n1; }
    double hx2() const { return 2.0 / (n2 + 1); }
    double x1(int i) const { return i * dx1(); }
    double x2(int j) const { return -1.0 + (j + 1) * hx2(); }  // j = 0..n2-1

    /// Angular frequency of discrete Fourier mode i (FFTW ordering).
    double omega(int i) const {
        const int k = (i <= n1 / 2) ? i : i - n1;
        return kTwoPi / length1 * k;
    }

    void validate() const {
        if (n1 < 16 || !is_power_of_two(n1))
            throw ConfigError("StripGrid: n1 must be a power of two >= 16");
        if (n2 < 4) throw ConfigError("StripGrid: n2 must be >= 4");
        if (!(length1 > 0.0)) throw ConfigError("StripGrid: length1 must be positive");
    }

    bool operator==(const StripGrid&) const = default;
};

} // namespace wgnls

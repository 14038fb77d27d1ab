#pragma once

#include <cstdint>
#include <random>

#include "wgnls/field.hpp"
#include "wgnls/spectral.hpp"

namespace wgnls {

/// Deterministic random source. Gaussian variates come from a hand-rolled
/// Box-Muller on top of mt19937_64 so streams are identical across standard
/// library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // (0, 1]
        return (static_cast<double>(eng_()) + 1.0) * 0x1.0p-64;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(kTwoPi * u2);
        have_spare_ = true;
        return r * std::cos(kTwoPi * u2);
    }

    cdouble cgaussian() { return {gaussian(), gaussian()}; }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Random field with independent complex Gaussian modal coefficients damped
/// by (1 + k^2)^{-s}; k is the integer mode number. Returned in modal form.
Field1 random_field1(const SpectralCore& core, Rng& rng, double s = 1.5);

/// 2D variant with damping (1 + k^2 + mu_j)^{-s}. H_0^1 by construction.
Field2 random_field2(const SpectralCore& core, Rng& rng, double s = 1.5);

} // namespace wgnls

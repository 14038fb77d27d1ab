#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wgnls {

using cdouble = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Computes the n-point Gauss-Legendre rule by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

/// Integrates f over [a, b] with an n-point Gauss-Legendre rule.
template <typename F>
double gauss_integrate(const F& f, double a, double b, const GaussRule& rule) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return acc * half;
}

/// Ordinary least-squares line fit y = slope*x + intercept.
/// residual is the RMS of the fit residuals. No point rejection.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;
    int points = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

inline bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Unit-modulus phase factor. The first-order modulus correction keeps long
/// products of phases from accumulating a systematic |z| bias, which matters
/// for the strict mass-conservation budgets of the integrators.
inline cdouble unit_phase(double angle) {
    const cdouble z = std::polar(1.0, angle);
    return z * (1.5 - 0.5 * std::norm(z));
}

} // namespace wgnls

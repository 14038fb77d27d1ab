#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wgnls/errors.hpp"
#include "wgnls/numerics.hpp"

namespace wgnls {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

enum class DomainKind {
    ClosedCurve,  // M = T, period 2*pi
    OpenCurve,    // M = R, approximated by a periodic box of length L_box
};

/// A planar curve given by its curvature kappa on M. The embedding is never
/// stored; it is reconstructed on demand from kappa (normal parametrization
/// is then automatic). Derivatives are supplied analytically for built-ins
/// and spectrally for sampled curvature.
struct CurveSpec {
    DomainKind domain_kind = DomainKind::ClosedCurve;
    double length = kTwoPi;  // 2*pi for closed curves, L_box otherwise
    std::string name = "custom";
    std::function<double(double)> kappa;
    std::function<double(double)> kappa_d1;
    std::function<double(double)> kappa_d2;

    static CurveSpec circle();
    static CurveSpec line(double box_length);
    /// kappa(x1) = 1 + a*cos(n*x1) on the closed domain, n >= 1 integer.
    static CurveSpec perturbed_circle(double a, int n);
    /// Curvature from uniform samples with spectral (trigonometric) interpolation.
    static CurveSpec from_samples(DomainKind kind, double box_length,
                                  const std::vector<double>& samples,
                                  std::string name = "sampled");

    /// Sampled sup norm of |kappa| (8192 uniform samples).
    double kappa_sup() const;

    /// Checks the admissibility invariants: boundedness, closed-curve turning
    /// number (integral of kappa equals 2*pi within 1e-10), open-curve
    /// compact support (boundary values below 1e-12).
    void validate() const;
};

/// Sampled embedding of the curve: gamma, unit tangent, unit normal and the
/// tangent angle at n uniform parameter values.
struct CurveFrame {
    DomainKind domain_kind = DomainKind::ClosedCurve;
    double length = kTwoPi;
    std::vector<double> x1;
    std::vector<Vec2> gamma;
    std::vector<Vec2> tangent;
    std::vector<Vec2> normal;
    std::vector<double> theta;
    double closure_residual = 0.0;  // |gamma(L) - gamma(0)|

    int size() const { return static_cast<int>(x1.size()); }
};

/// Exact-in-theta evaluator behind curve reconstruction. The tangent angle is
/// the spectral antiderivative of kappa (a linear term plus a trigonometric
/// series); gamma is obtained by panel-wise Gauss-Legendre quadrature of
/// (cos theta, sin theta) between cached anchors.
class CurveEvaluator {
  public:
    CurveEvaluator(const CurveSpec& spec, int n_modes);

    double theta(double x) const;
    Vec2 tangent(double x) const { const double t = theta(x); return {std::cos(t), std::sin(t)}; }
    Vec2 normal(double x) const { const double t = theta(x); return {-std::sin(t), std::cos(t)}; }
    Vec2 gamma(double x) const;
    Vec2 closure_defect() const;
    double length() const { return length_; }

  private:
    double length_;
    int n_;
    double kbar_ = 0.0;
    std::vector<cdouble> kappa_hat_;  // mean removed, Nyquist zeroed
    std::vector<Vec2> anchors_;       // gamma at x = m*length/n, m = 0..n
    GaussRule rule_;
};

/// Reconstructs the embedding from curvature. n_samples must be a power of
/// two >= 16. Throws ClosureViolation if a closed curve fails to close within
/// 1e-8, NonUnitSpeed on internal consistency failure.
CurveFrame reconstruct_curve(const CurveSpec& spec, int n_samples);

/// The tubular coordinate map Phi_eps(x1, x2) = gamma(x1) + eps*x2*nu(x1).
Vec2 phi_map(const CurveSpec& spec, double eps, double x1, double x2);

/// Sampled self-intersection test of the tube boundary Phi_eps(x1, +/-1).
/// This is a heuristic: it tests the boundary polylines pairwise at the given
/// resolution and cannot certify global injectivity of the continuum map.
struct InjectivityReport {
    bool ok = true;
    double min_pair_distance = 0.0;
    std::vector<std::pair<double, double>> offending;  // parameter pairs
};

InjectivityReport check_injectivity(const CurveSpec& spec, double eps, int n_samples);

/// Throws SelfIntersection when the report is not ok.
void require_injective(const CurveSpec& spec, double eps, int n_samples);

} // namespace wgnls

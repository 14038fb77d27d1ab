#pragma once

#include <vector>

#include "wgnls/curve.hpp"
#include "wgnls/diagnostics.hpp"
#include "wgnls/field.hpp"
#include "wgnls/spectral.hpp"

namespace wgnls {

/// The effective 1D equation
///   i dtheta/dt = D1^2 theta - kappa(x1)^2/4 theta + lambda*gamma |theta|^2 theta
/// integrated by Strang splitting, kinetic-potential-kinetic. The
/// potential+cubic substep is solved in closed form (|theta| is pointwise
/// invariant under it), so mass is conserved exactly per step.
struct Effective1DProblem {
    CurveSpec curve;
    double lambda = 0.0;
    double gamma = 0.75;
    Field1 theta0;  // nodal
    double dt = 1e-3;
    double t_end = 1.0;
    std::vector<double> snapshot_times;
    bool dealias = false;

    void validate(const SpectralCore& core) const;
};

struct RunResult1D {
    std::vector<double> times;
    std::vector<Field1> snapshots;  // nodal
    std::vector<DiagnosticsRecord> diagnostics;
};

class Strang1D {
  public:
    Strang1D(const SpectralCore& core, const CurveSpec& curve, double lambda,
             double gamma = 0.75, bool dealias = false);

    /// One Strang step of size dt; nodal in and out.
    void step(Field1& theta, double dt) const;

  private:
    const SpectralCore& core_;
    double lambda_;
    double gamma_;
    bool dealias_;
    std::vector<double> potential_;  // -kappa^2/4 on the x1 nodes
};

/// E(theta) = 1/2 int (|dtheta|^2 - kappa^2/4 |theta|^2) + lambda*gamma/4 int |theta|^4.
double energy_1d(const SpectralCore& core, const CurveSpec& curve, const Field1& theta,
                 double lambda, double gamma = 0.75);

/// Integrates to t_end; dt is locally shortened so that snapshot times are
/// hit exactly. Throws NonFiniteState when the state stops being finite.
RunResult1D run_1d(const SpectralCore& core, const Effective1DProblem& problem);

/// Splits [0, t_end] at the snapshot times and returns the sorted list of
/// segment boundaries (shared with the 2D driver).
std::vector<double> snapshot_schedule(const std::vector<double>& snapshot_times, double t_end);

} // namespace wgnls

#pragma once

#include <cstdint>
#include <vector>

#include "wgnls/curve.hpp"
#include "wgnls/diagnostics.hpp"
#include "wgnls/field.hpp"
#include "wgnls/geometry.hpp"
#include "wgnls/spectral.hpp"

namespace wgnls {

/// Families of Cauchy data for the strip problem.
///   TensorSmooth:      phi0 = theta0(x1) e_1(x2), theta0 analytic.
///   TensorPlusExcited: phi0 = theta0 e_1 + eps^2 a(x1) e_2. The shifted-
///                      Hamiltonian norm of the excitation is eps-independent.
///   RoughH1:           phi0 = theta0 e_1 with |c_k| ~ (1+|k|)^{-s} phases up
///                      to the sharp cutoff K(eps) = round(eps^{-1/2}), which
///                      keeps the H1 norm essentially flat while the H2 norm
///                      grows like eps^{-1/2}.
enum class DataFamily { TensorSmooth, TensorPlusExcited, RoughH1 };

struct Theta0Profile {
    enum class Kind { PlaneWave, Modulated, RingBump, Bump } kind = Kind::PlaneWave;
    double amplitude = 1.0;
    int mode = 1;             // carrier wavenumber k0
    double modulation = 0.0;  // Modulated: A (1 + modulation*cos(base*x1)) e^{i k0 base x1}
    double width = 1.0;       // RingBump concentration; Bump width
    double center = -1.0;     // Bump center; negative means box midpoint
};

struct InitialDataSpec {
    DataFamily family = DataFamily::TensorSmooth;
    Theta0Profile theta0;
    double excited_amplitude = 1.0;  // a(x1) = amplitude * cos(mode * base * x1)
    int excited_mode = 1;
    double rough_s = 1.5;
    std::uint64_t seed = 0;
};

Field1 synth_theta0(const SpectralCore& core, const InitialDataSpec& spec, double eps);
Field2 make_initial_data(const SpectralCore& core, const InitialDataSpec& spec, double eps);

/// Gauge-removed strip evolution
///   i dphi/dt = H_eps phi + (V_eps - mu_1/eps^2) phi + lambda m^{-1} |phi|^2 phi
/// integrated with an integrating-factor RK4: classical RK4 on the unknown
/// conjugated by exp(i t L), L = D1^2 + eps^{-2}(D2^2 - mu_1). The stiff
/// transverse phases live entirely in the integrating factor; the remaining
/// right-hand side B(phi) = (P1^2 - D1^2) phi + V phi + lambda m^{-1}|phi|^2 phi
/// is O(1) + O(eps) * D1^2.
struct Strip2DProblem {
    CurveSpec curve;
    double eps = 0.1;
    double lambda = 0.0;
    Field2 phi0;  // nodal
    double dt = 0.0;  // <= 0 selects the stability rule at run start
    double t_end = 1.0;
    std::vector<double> snapshot_times;
    double eps0_cap = 1.0;
    double mass_drift_abort = 1e-4;
    bool dealias = false;
};

class IfRk4Stepper {
  public:
    IfRk4Stepper(const SpectralCore& core, GeometryCoefficients coeffs, double lambda,
                 bool dealias = false);

    /// B(phi): the bounded part of the right-hand side, nodal in and out.
    Field2 rhs_bounded(const Field2& phi) const;

    /// One integrating-factor RK4 step. Throws StepRejected on a non-finite
    /// stage value.
    void step(Field2& phi, double dt);

    const GeometryCoefficients& coeffs() const { return coeffs_; }

  private:
    const SpectralCore& core_;
    GeometryCoefficients coeffs_;
    double lambda_;
    bool dealias_;
    double cached_dt_ = 0.0;
    std::vector<cdouble> half_phase_;

    void half_prop(Field2& phi) const;  // exp(-i (dt/2) L), nodal in/out
};

struct RunResult2D {
    std::vector<double> times;
    std::vector<Field2> snapshots;  // nodal
    std::vector<DiagnosticsRecord> diagnostics;
    double dt_used = 0.0;
};

/// dt = c_safe / (eps ||kappa|| k_max^2 + ||V|| + |lambda| max|phi0|^2 + 1), c_safe = 1/2.
double dt_stability(const SpectralCore& core, const GeometryCoefficients& coeffs, double lambda,
                    const Field2& phi0);

RunResult2D run_2d(const SpectralCore& core, const Strip2DProblem& problem);

/// E_eps(phi), with the transverse and -mu_1/eps^2 contributions combined
/// modally as eps^{-2} sum (mu_k - mu_1)|c_k|^2 to dodge the catastrophic
/// cancellation between the two.
double energy_2d(const SpectralCore& core, const Field2& phi, const GeometryCoefficients& coeffs,
                 double eps, double lambda);

/// One physical-domain sample of the reconstructed solution of the original
/// waveguide problem.
struct PhysicalSample {
    double x = 0.0;
    double y = 0.0;
    cdouble psi;
    double weight = 0.0;  // quadrature weight including the Jacobian eps*m
};

/// psi = eps^{-1/2} m^{-1/2} e^{-i mu_1 t / eps^2} phi at Phi_eps(x1, x2).
/// The weighted L2 mass of the output equals the L2(S) mass of the input.
std::vector<PhysicalSample> reconstruct_physical(const SpectralCore& core, const Field2& phi,
                                                 const CurveSpec& spec, double eps, double t);

/// Tensor variant for 1D states: reconstructs theta(x1) e_1(x2).
std::vector<PhysicalSample> reconstruct_physical(const SpectralCore& core, const Field1& theta,
                                                 const CurveSpec& spec, double eps, double t);

double physical_mass(const std::vector<PhysicalSample>& samples);

} // namespace wgnls

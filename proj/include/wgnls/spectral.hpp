#pragma once

#include <vector>

#include "wgnls/field.hpp"
#include "wgnls/geometry.hpp"
#include "wgnls/grid.hpp"
#include "wgnls/transverse.hpp"

namespace wgnls {

enum class Sobolev { L2, H1, H2 };

/// Grid-bound spectral toolbox: Fourier transforms and differentiation in x1,
/// sine transforms in x2, the operators P_{eps,1} and the shifted Hamiltonian,
/// the stiff diagonal propagator, and discrete Sobolev norms.
///
/// Discipline: variable-coefficient products act on nodal values, derivative
/// and propagator multipliers act on modal coefficients. The H2 norm is the
/// six-term modal definition over {u, D1 u, D2 u, D1^2 u, D2^2 u, D1 D2 u}.
///
/// Plans are immutable after construction; concurrent use is permitted.
class SpectralCore {
  public:
    explicit SpectralCore(StripGrid grid);
    ~SpectralCore();
    SpectralCore(const SpectralCore&) = delete;
    SpectralCore& operator=(const SpectralCore&) = delete;

    const StripGrid& grid() const { return grid_; }
    const TransverseBasis& basis() const { return basis_; }
    double omega(int i) const { return grid_.omega(i); }

    Field1 make_field1() const { return Field1(grid_.n1); }
    Field2 make_field2() const { return Field2(grid_.n1, grid_.n2); }

    // Representation moves, in place. Conversions are mutually inverse.
    void to_nodal(Field1& f) const;
    void to_modal(Field1& f) const;
    void to_nodal(Field2& f) const;
    void to_modal_x2(Field2& f) const;
    void to_modal(Field2& f) const;
    void convert(Field2& f, Rep target) const;

    /// Fourier differentiation d^order/dx1^order; exact on band-limited data.
    /// Returns the same representation it was given.
    Field1 d1(const Field1& f, int order) const;
    Field2 d1(const Field2& f, int order) const;

    /// P_{eps,1} u = m^{-1/2} D_{x1} (m^{-1/2} u), nodal in and out.
    Field2 apply_p1(const Field2& f, const GeometryCoefficients& coeffs) const;

    /// (P_{eps,1}^2 - D_{x1}^2) u with both operators built from the same
    /// first-derivative multiplier, fused into five transforms. Nodal in/out.
    Field2 p1sq_minus_d1sq(const Field2& f, const GeometryCoefficients& coeffs) const;

    /// (H_eps - mu_1/eps^2) u = P_{eps,1}^2 u + eps^{-2} (D_{x2}^2 - mu_1) u.
    Field2 apply_h_eps_shifted(const Field2& f, const GeometryCoefficients& coeffs, double eps) const;

    /// exp(-i t (D1^2 + eps^{-2} (D2^2 - mu_1))), any representation.
    /// Unitary; satisfies the group law in t.
    void diag_propagate(Field2& f, double eps, double t) const;

    /// Modal multiplier table of the diagonal propagator (row-major in x1).
    std::vector<cdouble> diag_phase(double eps, double t) const;
    /// Multiply fully-modal coefficients by a table (field must be Modal).
    void apply_modal_table(Field2& f, const std::vector<cdouble>& table) const;

    double norm_l2(const Field1& f) const;
    double norm_l2(const Field2& f) const;
    double sobolev_norm(const Field1& f, Sobolev order) const;
    /// eps_weighted = true returns the graph-style triple sum
    /// ||D1^2 u|| + eps^{-2} ||(D2^2 - mu_1) u|| + ||u|| (order must be H2).
    double sobolev_norm(const Field2& f, Sobolev order, bool eps_weighted = false,
                        double eps = 1.0) const;
    /// || . ||_{L2(M, H1(-1,1))} via the modal formula sum (1+mu_k) |c_k|^2.
    double l2_strip_h1_transverse(const Field2& f) const;

    /// <phi, e_1>_{L2(-1,1)} as a nodal Field1.
    Field1 project_e1(const Field2& f) const;
    /// Pi_1 phi = <phi, e_1> e_1, slice-wise in x2. Same representation out.
    Field2 project_pi1(const Field2& f) const;
    /// (Id - Pi_1) phi.
    Field2 remove_pi1(const Field2& f) const;

    /// Optional 2/3-rule dealiasing filter (off by default in the solvers).
    void dealias_two_thirds(Field1& f) const;
    void dealias_two_thirds(Field2& f) const;

  private:
    StripGrid grid_;
    TransverseBasis basis_;
    void* plan_fwd2_ = nullptr;
    void* plan_bwd2_ = nullptr;
    void* plan_fwd1_ = nullptr;
    void* plan_bwd1_ = nullptr;

    // Raw transforms without representation bookkeeping.
    void fft1_forward_raw(cdouble* data) const;   // scales by 1/n1
    void fft1_backward_raw(cdouble* data) const;
    void fft1_forward_raw(Field2& f) const;
    void fft1_backward_raw(Field2& f) const;
    void dst2_forward_raw(Field2& f) const;
    void dst2_backward_raw(Field2& f) const;
    void multiply_x1_modal(Field2& f, int order) const;  // (i w)^order, raw
};

} // namespace wgnls

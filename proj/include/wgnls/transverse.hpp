#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "wgnls/field.hpp"
#include "wgnls/numerics.hpp"

namespace wgnls {

/// Dirichlet eigenbasis of D_{x2}^2 on (-1,1) sampled at the interior nodes
/// x2_j = -1 + 2j/(n2+1), j = 1..n2:
///
///   e_k(x2) = sin(k*pi*(x2+1)/2),  mu_k = (k*pi/2)^2,  e_1(x2) = cos(pi*x2/2).
///
/// The family is orthonormal in L2(-1,1), and exactly orthonormal in the
/// discrete inner product with quadrature weight h = 2/(n2+1). The modal
/// transforms below are a normalized DST-I; forward then backward is the
/// identity, and the weighted nodal norm equals the modal norm (Parseval).
class TransverseBasis {
  public:
    explicit TransverseBasis(int n2);
    ~TransverseBasis();
    TransverseBasis(const TransverseBasis&) = delete;
    TransverseBasis& operator=(const TransverseBasis&) = delete;

    int n2() const { return n2_; }
    double node(int j) const { return -1.0 + 2.0 * (j + 1) / (n2_ + 1); }
    /// Eigenvalue mu_k, k = 1..n2.
    double mu(int k) const { return mu_[k - 1]; }
    /// Quadrature weight of the interior-node rule.
    double quad_weight() const { return 2.0 / (n2_ + 1); }
    static double mode(int k, double x2) { return std::sin(0.5 * k * kPi * (x2 + 1.0)); }

    /// Nodal values -> coefficients of e_1..e_n2 (in place). Length must be n2.
    void modal_forward(std::span<cdouble> slice) const;
    void modal_backward(std::span<cdouble> slice) const;

    /// Apply the slice transforms across all x1 rows of a Field2 payload.
    void modal_forward_rows(cdouble* data, int n_rows) const;
    void modal_backward_rows(cdouble* data, int n_rows) const;

    /// Orthogonal projection onto e_1, applied to a nodal slice in place.
    void project_pi1_slice(std::span<cdouble> slice) const;

  private:
    int n2_;
    std::vector<double> mu_;
    std::vector<double> sine_;  // S_{kj} = sin((k+1)(j+1) pi/(n2+1)), symmetric
    void* plan_ = nullptr;      // fftw_plan, in-place DST-I over re/im pairs

    // Cross-over: small transverse sizes go through the dense matrix, which
    // beats FFTW's DST-I generic path by an order of magnitude there.
    bool use_dense() const { return n2_ <= 64; }
    void dense_apply(std::span<cdouble> slice, double scale, cdouble* scratch) const;
};

/// gamma = integral of e_1^4 over (-1,1) = 3/4, hard-coded.
inline double gamma_coefficient() { return 0.75; }

/// Quadrature self-check of gamma with an n-point Gauss-Legendre rule.
double gamma_quadrature(int n);

} // namespace wgnls

#include "wgnls/transverse.hpp"

#include <fftw3.h>

#include "fftw_local.hpp"
#include "wgnls/errors.hpp"

namespace wgnls {

TransverseBasis::TransverseBasis(int n2) : n2_(n2) {
    if (n2 < 4) throw ConfigError("TransverseBasis: n2 must be >= 4");
    mu_.resize(n2);
    for (int k = 1; k <= n2; ++k) mu_[k - 1] = 0.25 * k * k * kPi * kPi;
    sine_.resize(static_cast<std::size_t>(n2) * n2);
    for (int k = 0; k < n2; ++k)
        for (int j = 0; j < n2; ++j)
            sine_[static_cast<std::size_t>(k) * n2 + j] =
                std::sin(kPi * (k + 1) * (j + 1) / (n2 + 1));

    // One in-place DST-I plan acting on the interleaved re/im doubles of a
    // complex slice: rank-1 transform of length n2 with stride 2, batched
    // over the two components.
    std::vector<double> dummy(2 * static_cast<std::size_t>(n2));
    fftw_iodim dim{n2, 2, 2};
    fftw_iodim batch{2, 1, 1};
    fftw_r2r_kind kind = FFTW_RODFT00;
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan_ = fftw_plan_guru_r2r(1, &dim, 1, &batch, dummy.data(), dummy.data(), &kind,
                               FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan_) throw Error("TransverseBasis: FFTW plan creation failed");
}

TransverseBasis::~TransverseBasis() {
    if (plan_) {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(static_cast<fftw_plan>(plan_));
    }
}

void TransverseBasis::dense_apply(std::span<cdouble> slice, double scale, cdouble* scratch) const {
    for (int k = 0; k < n2_; ++k) {
        const double* row = &sine_[static_cast<std::size_t>(k) * n2_];
        cdouble acc{0.0, 0.0};
        for (int j = 0; j < n2_; ++j) acc += row[j] * slice[j];
        scratch[k] = acc * scale;
    }
    std::copy(scratch, scratch + n2_, slice.begin());
}

void TransverseBasis::modal_forward(std::span<cdouble> slice) const {
    if (static_cast<int>(slice.size()) != n2_)
        throw SizeMismatch("modal_forward: slice length != n2");
    if (use_dense()) {
        std::vector<cdouble> scratch(n2_);
        dense_apply(slice, 2.0 / (n2_ + 1), scratch.data());
        return;
    }
    double* raw = reinterpret_cast<double*>(slice.data());
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), raw, raw);
    const double scale = 1.0 / (n2_ + 1);
    for (auto& z : slice) z *= scale;
}

void TransverseBasis::modal_backward(std::span<cdouble> slice) const {
    if (static_cast<int>(slice.size()) != n2_)
        throw SizeMismatch("modal_backward: slice length != n2");
    if (use_dense()) {
        std::vector<cdouble> scratch(n2_);
        dense_apply(slice, 1.0, scratch.data());
        return;
    }
    double* raw = reinterpret_cast<double*>(slice.data());
    fftw_execute_r2r(static_cast<fftw_plan>(plan_), raw, raw);
    for (auto& z : slice) z *= 0.5;
}

void TransverseBasis::modal_forward_rows(cdouble* data, int n_rows) const {
    if (use_dense()) {
        std::vector<cdouble> scratch(n2_);
        const double scale = 2.0 / (n2_ + 1);
        for (int i = 0; i < n_rows; ++i)
            dense_apply(std::span<cdouble>(data + static_cast<std::size_t>(i) * n2_, n2_), scale,
                        scratch.data());
        return;
    }
    for (int i = 0; i < n_rows; ++i)
        modal_forward(std::span<cdouble>(data + static_cast<std::size_t>(i) * n2_, n2_));
}

void TransverseBasis::modal_backward_rows(cdouble* data, int n_rows) const {
    if (use_dense()) {
        std::vector<cdouble> scratch(n2_);
        for (int i = 0; i < n_rows; ++i)
            dense_apply(std::span<cdouble>(data + static_cast<std::size_t>(i) * n2_, n2_), 1.0,
                        scratch.data());
        return;
    }
    for (int i = 0; i < n_rows; ++i)
        modal_backward(std::span<cdouble>(data + static_cast<std::size_t>(i) * n2_, n2_));
}

void TransverseBasis::project_pi1_slice(std::span<cdouble> slice) const {
    modal_forward(slice);
    for (std::size_t k = 1; k < slice.size(); ++k) slice[k] = 0.0;
    modal_backward(slice);
}

double gamma_quadrature(int n) {
    const GaussRule rule = gauss_legendre(n);
    auto e1_4 = [](double x) {
        const double e = std::cos(0.5 * kPi * x);
        return e * e * e * e;
    };
    return gauss_integrate(e1_4, -1.0, 1.0, rule);
}

} // namespace wgnls

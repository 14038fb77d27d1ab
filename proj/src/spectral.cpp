#include "wgnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>

#include "fftw_local.hpp"

namespace wgnls {

namespace {
fftw_complex* fc(cdouble* p) { return reinterpret_cast<fftw_complex*>(p); }
} // namespace

SpectralCore::SpectralCore(StripGrid grid) : grid_(grid), basis_(grid.n2) {
    grid_.validate();
    std::vector<cdouble> dummy2(static_cast<std::size_t>(grid_.n1) * grid_.n2);
    std::vector<cdouble> dummy1(grid_.n1);

    fftw_iodim dim2{grid_.n1, grid_.n2, grid_.n2};
    fftw_iodim batch2{grid_.n2, 1, 1};
    fftw_iodim dim1{grid_.n1, 1, 1};
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    plan_fwd2_ = fftw_plan_guru_dft(1, &dim2, 1, &batch2, fc(dummy2.data()), fc(dummy2.data()),
                                    FFTW_FORWARD, flags);
    plan_bwd2_ = fftw_plan_guru_dft(1, &dim2, 1, &batch2, fc(dummy2.data()), fc(dummy2.data()),
                                    FFTW_BACKWARD, flags);
    plan_fwd1_ = fftw_plan_guru_dft(1, &dim1, 0, nullptr, fc(dummy1.data()), fc(dummy1.data()),
                                    FFTW_FORWARD, flags);
    plan_bwd1_ = fftw_plan_guru_dft(1, &dim1, 0, nullptr, fc(dummy1.data()), fc(dummy1.data()),
                                    FFTW_BACKWARD, flags);
    if (!plan_fwd2_ || !plan_bwd2_ || !plan_fwd1_ || !plan_bwd1_)
        throw Error("SpectralCore: FFTW plan creation failed");
}

SpectralCore::~SpectralCore() {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    for (void* p : {plan_fwd2_, plan_bwd2_, plan_fwd1_, plan_bwd1_})
        if (p) fftw_destroy_plan(static_cast<fftw_plan>(p));
}

void SpectralCore::dst2_forward_raw(Field2& f) const {
    basis_.modal_forward_rows(f.v.data(), grid_.n1);
}

void SpectralCore::dst2_backward_raw(Field2& f) const {
    basis_.modal_backward_rows(f.v.data(), grid_.n1);
}

void SpectralCore::fft1_forward_raw(cdouble* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd1_), fc(data), fc(data));
    const double scale = 1.0 / grid_.n1;
    for (int i = 0; i < grid_.n1; ++i) data[i] *= scale;
}

void SpectralCore::fft1_backward_raw(cdouble* data) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd1_), fc(data), fc(data));
}

void SpectralCore::fft1_forward_raw(Field2& f) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd2_), fc(f.v.data()), fc(f.v.data()));
    const double scale = 1.0 / grid_.n1;
    for (auto& z : f.v) z *= scale;
}

void SpectralCore::fft1_backward_raw(Field2& f) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_bwd2_), fc(f.v.data()), fc(f.v.data()));
}

void SpectralCore::to_nodal(Field1& f) const {
    if (f.size() != grid_.n1) throw SizeMismatch("Field1 size != n1");
    if (f.rep == Rep::Nodal) return;
    fft1_backward_raw(f.v.data());
    f.rep = Rep::Nodal;
}

void SpectralCore::to_modal(Field1& f) const {
    if (f.size() != grid_.n1) throw SizeMismatch("Field1 size != n1");
    if (f.rep == Rep::Modal) return;
    fft1_forward_raw(f.v.data());
    f.rep = Rep::Modal;
}

void SpectralCore::to_nodal(Field2& f) const { convert(f, Rep::Nodal); }
void SpectralCore::to_modal_x2(Field2& f) const { convert(f, Rep::ModalX2); }
void SpectralCore::to_modal(Field2& f) const { convert(f, Rep::Modal); }

void SpectralCore::convert(Field2& f, Rep target) const {
    if (f.n1 != grid_.n1 || f.n2 != grid_.n2) throw SizeMismatch("Field2 shape != grid");
    while (f.rep != target) {
        switch (f.rep) {
            case Rep::Nodal:
                dst2_forward_raw(f);
                f.rep = Rep::ModalX2;
                break;
            case Rep::ModalX2:
                if (target == Rep::Modal) {
                    fft1_forward_raw(f);
                    f.rep = Rep::Modal;
                } else {
                    dst2_backward_raw(f);
                    f.rep = Rep::Nodal;
                }
                break;
            case Rep::Modal:
                fft1_backward_raw(f);
                f.rep = Rep::ModalX2;
                break;
        }
    }
}

void SpectralCore::multiply_x1_modal(Field2& f, int order) const {
    for (int i = 0; i < grid_.n1; ++i) {
        const double w = grid_.omega(i);
        cdouble mult{1.0, 0.0};
        for (int o = 0; o < order; ++o) mult *= cdouble{0.0, w};
        if ((order % 2 == 1) && i == grid_.n1 / 2) mult = 0.0;  // Nyquist
        for (int j = 0; j < grid_.n2; ++j) f.at(i, j) *= mult;
    }
}

Field1 SpectralCore::d1(const Field1& f, int order) const {
    Field1 out = f;
    const Rep original = f.rep;
    to_modal(out);
    for (int i = 0; i < grid_.n1; ++i) {
        const double w = grid_.omega(i);
        cdouble mult{1.0, 0.0};
        for (int o = 0; o < order; ++o) mult *= cdouble{0.0, w};
        if ((order % 2 == 1) && i == grid_.n1 / 2) mult = 0.0;
        out[i] *= mult;
    }
    if (original == Rep::Nodal) to_nodal(out);
    return out;
}

Field2 SpectralCore::d1(const Field2& f, int order) const {
    // The x1 transform commutes with the x2 state, so differentiate in x1
    // modal space and restore whatever representation came in.
    Field2 out = f;
    if (f.rep == Rep::Modal) {
        multiply_x1_modal(out, order);
    } else {
        fft1_forward_raw(out);
        multiply_x1_modal(out, order);
        fft1_backward_raw(out);
    }
    return out;
}

Field2 SpectralCore::apply_p1(const Field2& f, const GeometryCoefficients& coeffs) const {
    if (f.rep != Rep::Nodal) throw Error("apply_p1: field must be nodal");
    if (f.n1 != grid_.n1 || f.n2 != grid_.n2) throw SizeMismatch("apply_p1: field shape != grid");
    Field2 out = f;
    for (std::size_t idx = 0; idx < out.v.size(); ++idx) out.v[idx] *= coeffs.inv_sqrt_m[idx];
    // D_{x1} = -i d/dx1: modal multiplier w (Nyquist zeroed).
    fft1_forward_raw(out);
    for (int i = 0; i < grid_.n1; ++i) {
        const double w = (i == grid_.n1 / 2) ? 0.0 : grid_.omega(i);
        for (int j = 0; j < grid_.n2; ++j) out.at(i, j) *= w;
    }
    fft1_backward_raw(out);
    for (std::size_t idx = 0; idx < out.v.size(); ++idx) out.v[idx] *= coeffs.inv_sqrt_m[idx];
    return out;
}

Field2 SpectralCore::p1sq_minus_d1sq(const Field2& f, const GeometryCoefficients& coeffs) const {
    if (f.rep != Rep::Nodal) throw Error("p1sq_minus_d1sq: field must be nodal");
    if (f.n1 != grid_.n1 || f.n2 != grid_.n2)
        throw SizeMismatch("p1sq_minus_d1sq: field shape != grid");

    auto multiply_d1 = [&](Field2& g) {
        for (int i = 0; i < grid_.n1; ++i) {
            const double w = (i == grid_.n1 / 2) ? 0.0 : grid_.omega(i);
            for (int j = 0; j < grid_.n2; ++j) g.at(i, j) *= w;
        }
    };

    Field2 dsq = f;  // D1^2 f, with the first-derivative Nyquist convention
    fft1_forward_raw(dsq);
    for (int i = 0; i < grid_.n1; ++i) {
        const double w = (i == grid_.n1 / 2) ? 0.0 : grid_.omega(i);
        for (int j = 0; j < grid_.n2; ++j) dsq.at(i, j) *= w * w;
    }
    fft1_backward_raw(dsq);

    Field2 out = f;
    for (std::size_t idx = 0; idx < out.v.size(); ++idx) out.v[idx] *= coeffs.inv_sqrt_m[idx];
    fft1_forward_raw(out);
    multiply_d1(out);
    fft1_backward_raw(out);
    for (std::size_t idx = 0; idx < out.v.size(); ++idx) out.v[idx] *= coeffs.inv_m[idx];
    fft1_forward_raw(out);
    multiply_d1(out);
    fft1_backward_raw(out);
    for (std::size_t idx = 0; idx < out.v.size(); ++idx)
        out.v[idx] = out.v[idx] * coeffs.inv_sqrt_m[idx] - dsq.v[idx];
    return out;
}

Field2 SpectralCore::apply_h_eps_shifted(const Field2& f, const GeometryCoefficients& coeffs,
                                         double eps) const {
    if (f.rep != Rep::Nodal) throw Error("apply_h_eps_shifted: field must be nodal");
    Field2 out = apply_p1(apply_p1(f, coeffs), coeffs);

    Field2 transverse = f;
    dst2_forward_raw(transverse);
    const double inv_eps2 = 1.0 / (eps * eps);
    const double mu1 = basis_.mu(1);
    for (int i = 0; i < grid_.n1; ++i)
        for (int j = 0; j < grid_.n2; ++j)
            transverse.at(i, j) *= inv_eps2 * (basis_.mu(j + 1) - mu1);
    dst2_backward_raw(transverse);
    add_scaled(out, 1.0, transverse);
    return out;
}

std::vector<cdouble> SpectralCore::diag_phase(double eps, double t) const {
    std::vector<cdouble> table(static_cast<std::size_t>(grid_.n1) * grid_.n2);
    const double inv_eps2 = 1.0 / (eps * eps);
    const double mu1 = basis_.mu(1);
    for (int i = 0; i < grid_.n1; ++i) {
        const double w = grid_.omega(i);
        for (int j = 0; j < grid_.n2; ++j) {
            const double lam = w * w + inv_eps2 * (basis_.mu(j + 1) - mu1);
            table[static_cast<std::size_t>(i) * grid_.n2 + j] = unit_phase(-t * lam);
        }
    }
    return table;
}

void SpectralCore::apply_modal_table(Field2& f, const std::vector<cdouble>& table) const {
    if (f.rep != Rep::Modal) throw Error("apply_modal_table: field must be fully modal");
    if (f.v.size() != table.size()) throw SizeMismatch("modal table size mismatch");
    for (std::size_t idx = 0; idx < f.v.size(); ++idx) f.v[idx] *= table[idx];
}

void SpectralCore::diag_propagate(Field2& f, double eps, double t) const {
    const Rep original = f.rep;
    to_modal(f);
    apply_modal_table(f, diag_phase(eps, t));
    convert(f, original);
}

double SpectralCore::norm_l2(const Field1& f) const {
    double acc = 0.0;
    for (const auto& z : f.v) acc += std::norm(z);
    const double weight = (f.rep == Rep::Nodal) ? grid_.dx1() : grid_.length1;
    return std::sqrt(acc * weight);
}

double SpectralCore::norm_l2(const Field2& f) const {
    double acc = 0.0;
    for (const auto& z : f.v) acc += std::norm(z);
    double weight = 0.0;
    switch (f.rep) {
        case Rep::Nodal: weight = grid_.dx1() * basis_.quad_weight(); break;
        case Rep::ModalX2: weight = grid_.dx1(); break;
        case Rep::Modal: weight = grid_.length1; break;
    }
    return std::sqrt(acc * weight);
}

double SpectralCore::sobolev_norm(const Field1& f, Sobolev order) const {
    Field1 g = f;
    to_modal(g);
    double acc = 0.0;
    for (int i = 0; i < grid_.n1; ++i) {
        const double w2 = grid_.omega(i) * grid_.omega(i);
        double mult = 1.0;
        if (order == Sobolev::H1) mult += w2;
        if (order == Sobolev::H2) mult += w2 + w2 * w2;
        acc += mult * std::norm(g[i]);
    }
    return std::sqrt(acc * grid_.length1);
}

double SpectralCore::sobolev_norm(const Field2& f, Sobolev order, bool eps_weighted,
                                  double eps) const {
    Field2 g = f;
    to_modal(g);
    const double mu1 = basis_.mu(1);
    if (eps_weighted) {
        if (order != Sobolev::H2) throw Error("sobolev_norm: eps_weighted requires H2");
        double d11 = 0.0, shifted = 0.0, plain = 0.0;
        for (int i = 0; i < grid_.n1; ++i) {
            const double w2 = grid_.omega(i) * grid_.omega(i);
            for (int j = 0; j < grid_.n2; ++j) {
                const double p = std::norm(g.at(i, j));
                const double dmu = basis_.mu(j + 1) - mu1;
                d11 += w2 * w2 * p;
                shifted += dmu * dmu * p;
                plain += p;
            }
        }
        const double box = grid_.length1;
        return std::sqrt(box * d11) + std::sqrt(box * shifted) / (eps * eps) + std::sqrt(box * plain);
    }
    double acc = 0.0;
    for (int i = 0; i < grid_.n1; ++i) {
        const double w2 = grid_.omega(i) * grid_.omega(i);
        for (int j = 0; j < grid_.n2; ++j) {
            const double mu = basis_.mu(j + 1);
            double mult = 1.0;
            if (order == Sobolev::H1) mult += w2 + mu;
            if (order == Sobolev::H2) mult += w2 + mu + w2 * w2 + mu * mu + w2 * mu;
            acc += mult * std::norm(g.at(i, j));
        }
    }
    return std::sqrt(acc * grid_.length1);
}

double SpectralCore::l2_strip_h1_transverse(const Field2& f) const {
    Field2 g = f;
    convert(g, Rep::ModalX2);
    double acc = 0.0;
    for (int i = 0; i < grid_.n1; ++i)
        for (int j = 0; j < grid_.n2; ++j)
            acc += (1.0 + basis_.mu(j + 1)) * std::norm(g.at(i, j));
    return std::sqrt(acc * grid_.dx1());
}

Field1 SpectralCore::project_e1(const Field2& f) const {
    Field2 g = f;
    convert(g, Rep::ModalX2);
    Field1 out(grid_.n1, Rep::Nodal);
    for (int i = 0; i < grid_.n1; ++i) out[i] = g.at(i, 0);
    return out;
}

Field2 SpectralCore::project_pi1(const Field2& f) const {
    Field2 out = f;
    const Rep original = f.rep;
    if (original == Rep::Nodal) convert(out, Rep::ModalX2);
    for (int i = 0; i < grid_.n1; ++i)
        for (int j = 1; j < grid_.n2; ++j) out.at(i, j) = 0.0;
    convert(out, original);
    return out;
}

Field2 SpectralCore::remove_pi1(const Field2& f) const {
    Field2 out = f;
    const Rep original = f.rep;
    if (original == Rep::Nodal) convert(out, Rep::ModalX2);
    for (int i = 0; i < grid_.n1; ++i) out.at(i, 0) = 0.0;
    convert(out, original);
    return out;
}

void SpectralCore::dealias_two_thirds(Field1& f) const {
    const Rep original = f.rep;
    to_modal(f);
    for (int i = 0; i < grid_.n1; ++i) {
        const int k = (i <= grid_.n1 / 2) ? i : grid_.n1 - i;
        if (k > grid_.n1 / 3) f[i] = 0.0;
    }
    if (original == Rep::Nodal) to_nodal(f);
}

void SpectralCore::dealias_two_thirds(Field2& f) const {
    const Rep original = f.rep;
    to_modal(f);
    for (int i = 0; i < grid_.n1; ++i) {
        const int k = (i <= grid_.n1 / 2) ? i : grid_.n1 - i;
        for (int j = 0; j < grid_.n2; ++j) {
            if (k > grid_.n1 / 3 || (j + 1) > (2 * grid_.n2) / 3) f.at(i, j) = 0.0;
        }
    }
    convert(f, original);
}

} // namespace wgnls

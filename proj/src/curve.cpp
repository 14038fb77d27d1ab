#include "wgnls/curve.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fftw_local.hpp"

namespace wgnls {

namespace {

// c_k = (1/n) sum_j f_j exp(-2 pi i k j / n), FFTW ordering.
std::vector<cdouble> dft_coefficients(const std::vector<double>& samples) {
    const int n = static_cast<int>(samples.size());
    std::vector<cdouble> in(n), out(n);
    for (int i = 0; i < n; ++i) in[i] = samples[i];
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    for (auto& c : out) c /= static_cast<double>(n);
    return out;
}

double sampled_integral(const std::function<double(double)>& f, double length, int n) {
    // Rectangle rule on a uniform grid; spectrally accurate for smooth
    // periodic integrands.
    double acc = 0.0;
    const double h = length / n;
    for (int i = 0; i < n; ++i) acc += f(i * h);
    return acc * h;
}

} // namespace

CurveSpec CurveSpec::circle() {
    CurveSpec s;
    s.domain_kind = DomainKind::ClosedCurve;
    s.length = kTwoPi;
    s.name = "circle";
    s.kappa = [](double) { return 1.0; };
    s.kappa_d1 = [](double) { return 0.0; };
    s.kappa_d2 = [](double) { return 0.0; };
    return s;
}

CurveSpec CurveSpec::line(double box_length) {
    CurveSpec s;
    s.domain_kind = DomainKind::OpenCurve;
    s.length = box_length;
    s.name = "line";
    s.kappa = [](double) { return 0.0; };
    s.kappa_d1 = [](double) { return 0.0; };
    s.kappa_d2 = [](double) { return 0.0; };
    return s;
}

CurveSpec CurveSpec::perturbed_circle(double a, int n) {
    if (n < 1) throw ConfigError("perturbed_circle: n must be >= 1");
    CurveSpec s;
    s.domain_kind = DomainKind::ClosedCurve;
    s.length = kTwoPi;
    s.name = "perturbed_circle";
    const double dn = static_cast<double>(n);
    s.kappa = [a, dn](double x) { return 1.0 + a * std::cos(dn * x); };
    s.kappa_d1 = [a, dn](double x) { return -a * dn * std::sin(dn * x); };
    s.kappa_d2 = [a, dn](double x) { return -a * dn * dn * std::cos(dn * x); };
    return s;
}

CurveSpec CurveSpec::from_samples(DomainKind kind, double box_length,
                                  const std::vector<double>& samples, std::string name) {
    const int n = static_cast<int>(samples.size());
    if (n < 16 || !is_power_of_two(n))
        throw ConfigError("from_samples: sample count must be a power of two >= 16");
    auto coeffs = std::make_shared<std::vector<cdouble>>(dft_coefficients(samples));
    (*coeffs)[n / 2] = 0.0;  // drop the Nyquist mode so odd derivatives stay real
    const double base = kTwoPi / box_length;

    // Sum of c_k (i w_k)^order e^{i w_k x} over k, using conjugate symmetry.
    auto eval = [coeffs, n, base](double x, int order) {
        double acc = (order == 0) ? (*coeffs)[0].real() : 0.0;
        const cdouble rot = std::polar(1.0, base * x);
        cdouble ph = rot;
        for (int k = 1; k < n / 2; ++k) {
            const double w = base * k;
            cdouble term = (*coeffs)[k] * ph;
            for (int o = 0; o < order; ++o) term *= cdouble{0.0, w};
            acc += 2.0 * term.real();
            ph *= rot;
        }
        return acc;
    };

    CurveSpec s;
    s.domain_kind = kind;
    s.length = box_length;
    s.name = std::move(name);
    s.kappa = [eval](double x) { return eval(x, 0); };
    s.kappa_d1 = [eval](double x) { return eval(x, 1); };
    s.kappa_d2 = [eval](double x) { return eval(x, 2); };
    return s;
}

double CurveSpec::kappa_sup() const {
    const int n = 8192;
    double sup = 0.0;
    for (int i = 0; i < n; ++i) sup = std::max(sup, std::abs(kappa(length * i / n)));
    return sup;
}

void CurveSpec::validate() const {
    if (!kappa || !kappa_d1 || !kappa_d2)
        throw ConfigError("CurveSpec: kappa and its derivatives must be set");
    if (!(length > 0.0)) throw ConfigError("CurveSpec: nonpositive domain length");

    const int n = 8192;
    for (int i = 0; i < n; i += 64) {
        const double x = length * i / n;
        if (!std::isfinite(kappa(x)) || !std::isfinite(kappa_d1(x)) || !std::isfinite(kappa_d2(x)))
            throw ConfigError("CurveSpec: kappa or a derivative is not finite");
    }
    if (domain_kind == DomainKind::ClosedCurve) {
        if (std::abs(length - kTwoPi) > 1e-12)
            throw ConfigError("CurveSpec: closed curves must have period 2*pi");
        const double total_turn = sampled_integral(kappa, length, n);
        if (std::abs(total_turn - kTwoPi) > 1e-10)
            throw ConfigError("CurveSpec: closed curve must have turning number one");
    } else {
        const double h = length / n;
        for (double x : {0.0, h, length - h}) {
            if (std::abs(kappa(x)) > 1e-12)
                throw ConfigError("CurveSpec: open-curve kappa must vanish at the box edges");
        }
    }
}

CurveEvaluator::CurveEvaluator(const CurveSpec& spec, int n_modes)
    : length_(spec.length), n_(n_modes), rule_(gauss_legendre(8)) {
    std::vector<double> samples(n_);
    for (int i = 0; i < n_; ++i) samples[i] = spec.kappa(length_ * i / n_);
    kappa_hat_ = dft_coefficients(samples);
    kbar_ = kappa_hat_[0].real();
    kappa_hat_[0] = 0.0;
    kappa_hat_[n_ / 2] = 0.0;

    anchors_.resize(n_ + 1);
    anchors_[0] = {0.0, 0.0};
    const double h = length_ / n_;
    for (int m = 0; m < n_; ++m) {
        Vec2 seg{0.0, 0.0};
        const double a = m * h;
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
            const Vec2 t = tangent(a + 0.5 * h * (1.0 + rule_.nodes[q]));
            seg = seg + t * rule_.weights[q];
        }
        anchors_[m + 1] = anchors_[m] + seg * (0.5 * h);
    }
}

double CurveEvaluator::theta(double x) const {
    // theta(x) = kbar*x + sum_{k!=0} c_k (e^{i w_k x} - 1)/(i w_k), using
    // conjugate symmetry of the coefficients of the real function kappa.
    const double base = kTwoPi / length_;
    double acc = kbar_ * x;
    const cdouble rot = std::polar(1.0, base * x);
    cdouble ph = rot;
    for (int k = 1; k < n_ / 2; ++k) {
        const double w = base * k;
        const cdouble term = kappa_hat_[k] * (ph - 1.0) / cdouble{0.0, w};
        acc += 2.0 * term.real();
        ph *= rot;
    }
    return acc;
}

Vec2 CurveEvaluator::gamma(double x) const {
    const double h = length_ / n_;
    int m = static_cast<int>(std::floor(x / h));
    m = std::clamp(m, 0, n_);
    const double a = m * h;
    Vec2 acc = anchors_[m];
    if (x > a) {
        Vec2 seg{0.0, 0.0};
        const double half = 0.5 * (x - a);
        for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
            const Vec2 t = tangent(a + half * (1.0 + rule_.nodes[q]));
            seg = seg + t * rule_.weights[q];
        }
        acc = acc + seg * half;
    }
    return acc;
}

Vec2 CurveEvaluator::closure_defect() const { return anchors_[n_] - anchors_[0]; }

CurveFrame reconstruct_curve(const CurveSpec& spec, int n_samples) {
    spec.validate();
    if (n_samples < 16 || !is_power_of_two(n_samples))
        throw ConfigError("reconstruct_curve: n_samples must be a power of two >= 16");

    CurveEvaluator ev(spec, n_samples);
    CurveFrame frame;
    frame.domain_kind = spec.domain_kind;
    frame.length = spec.length;
    frame.x1.resize(n_samples);
    frame.gamma.resize(n_samples);
    frame.tangent.resize(n_samples);
    frame.normal.resize(n_samples);
    frame.theta.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double x = spec.length * i / n_samples;
        frame.x1[i] = x;
        frame.theta[i] = ev.theta(x);
        frame.tangent[i] = {std::cos(frame.theta[i]), std::sin(frame.theta[i])};
        frame.normal[i] = {-frame.tangent[i].y, frame.tangent[i].x};
        frame.gamma[i] = ev.gamma(x);
        if (std::abs(frame.tangent[i].norm() - 1.0) > 1e-10)
            throw NonUnitSpeed("reconstruct_curve: tangent is not unit length");
    }
    frame.closure_residual = ev.closure_defect().norm();
    if (spec.domain_kind == DomainKind::ClosedCurve && frame.closure_residual > 1e-8)
        throw ClosureViolation("reconstruct_curve: closed curve fails to close, residual = " +
                               std::to_string(frame.closure_residual));
    return frame;
}

Vec2 phi_map(const CurveSpec& spec, double eps, double x1, double x2) {
    if (x2 < -1.0 || x2 > 1.0) throw Error("phi_map: x2 outside [-1, 1]");
    if (spec.domain_kind == DomainKind::ClosedCurve) {
        x1 = std::fmod(x1, spec.length);
        if (x1 < 0.0) x1 += spec.length;
    } else if (x1 < 0.0 || x1 > spec.length) {
        throw Error("phi_map: x1 outside the box");
    }
    CurveEvaluator ev(spec, 512);
    return ev.gamma(x1) + ev.normal(x1) * (eps * x2);
}

namespace {

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.x * ab.x + ab.y * ab.y;
    double t = len2 > 0.0 ? ((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

struct SegmentCheck {
    bool intersects;
    double distance;
};

SegmentCheck segment_pair_check(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return {true, 0.0};
    const double dist = std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                                 std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
    return {dist < 1e-12, dist};
}

} // namespace

InjectivityReport check_injectivity(const CurveSpec& spec, double eps, int n_samples) {
    const CurveFrame frame = reconstruct_curve(spec, n_samples);
    const int n = frame.size();
    std::vector<Vec2> top(n), bot(n);
    for (int i = 0; i < n; ++i) {
        top[i] = frame.gamma[i] + frame.normal[i] * eps;
        bot[i] = frame.gamma[i] - frame.normal[i] * eps;
    }
    const bool closed = spec.domain_kind == DomainKind::ClosedCurve;
    const int nseg = closed ? n : n - 1;
    auto seg = [&](const std::vector<Vec2>& poly, int i) {
        return std::pair<Vec2, Vec2>{poly[i], poly[(i + 1) % n]};
    };

    InjectivityReport report;
    report.min_pair_distance = std::numeric_limits<double>::infinity();
    auto record = [&](double xa, double xb, const SegmentCheck& chk) {
        report.min_pair_distance = std::min(report.min_pair_distance, chk.distance);
        if (chk.intersects) {
            report.ok = false;
            if (report.offending.size() < 64) report.offending.emplace_back(xa, xb);
        }
    };

    for (int side = 0; side < 2; ++side) {
        const auto& poly = side == 0 ? top : bot;
        for (int i = 0; i < nseg; ++i) {
            for (int j = i + 2; j < nseg; ++j) {
                if (closed && i == 0 && j == nseg - 1) continue;  // wrap-adjacent
                const auto [a, b] = seg(poly, i);
                const auto [c, d] = seg(poly, j);
                record(frame.x1[i], frame.x1[j], segment_pair_check(a, b, c, d));
            }
        }
    }
    for (int i = 0; i < nseg; ++i) {
        for (int j = 0; j < nseg; ++j) {
            const auto [a, b] = seg(top, i);
            const auto [c, d] = seg(bot, j);
            record(frame.x1[i], frame.x1[j], segment_pair_check(a, b, c, d));
        }
    }
    return report;
}

void require_injective(const CurveSpec& spec, double eps, int n_samples) {
    const InjectivityReport report = check_injectivity(spec, eps, n_samples);
    if (!report.ok)
        throw SelfIntersection("tube boundary self-intersects; " +
                               std::to_string(report.offending.size()) + " offending pairs, first near x1 = " +
                               std::to_string(report.offending.front().first));
}

} // namespace wgnls

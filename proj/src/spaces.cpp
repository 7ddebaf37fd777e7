#include "bergman/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

double default_gamma(double p) { return std::max(4.0 * p - 1.0, 9.0); }

TestFunction TestFunction::make(const WeightProfile& prof, cplx a, double p, double gamma) {
    if (std::abs(a) >= 1.0) throw std::invalid_argument("test function needs |a| < 1");
    if (!(p > 0.0)) throw std::invalid_argument("test function needs p > 0");
    TestFunction tf;
    tf.a = a;
    tf.p = p;
    tf.gamma = gamma < 0.0 ? default_gamma(p) : gamma;
    tf.box_mass = prof.box_mass_at(std::abs(a));
    if (!(tf.box_mass > 0.0)) throw std::invalid_argument("empty carleson box");
    return tf;
}

cplx TestFunction::eval(cplx z) const {
    const double c = (gamma + 1.0) / p;
    cplx base = (1.0 - std::norm(a)) / (1.0 - std::conj(a) * z);
    return std::pow(base, cplx(c, 0.0)) * std::pow(box_mass, -1.0 / p);
}

double TestFunction::abs_value(cplx z) const {
    const double c = (gamma + 1.0) / p;
    double base = (1.0 - std::norm(a)) / std::abs(1.0 - std::conj(a) * z);
    return std::pow(base, c) * std::pow(box_mass, -1.0 / p);
}

double norm_Ap(const std::function<cplx(cplx)>& f, const WeightProfile& prof, double p,
               int levels, int gauss_order) {
    auto quad = DiskQuadrature::get(levels, gauss_order);
    double v = quad->integrate([&](cplx z) {
        return std::pow(std::abs(f(z)), p) * prof.density(std::abs(z));
    });
    return std::pow(v, 1.0 / p);
}

cplx inner_product_A2(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g,
                      const WeightProfile& prof, int levels, int gauss_order) {
    auto quad = DiskQuadrature::get(levels, gauss_order);
    double re = quad->integrate([&](cplx z) {
        return (f(z) * std::conj(g(z))).real() * prof.density(std::abs(z));
    });
    double im = quad->integrate([&](cplx z) {
        return (f(z) * std::conj(g(z))).imag() * prof.density(std::abs(z));
    });
    return {re, im};
}

KernelSeries::KernelSeries(const WeightProfile& prof, cplx z, int truncation)
    : z_(z), N_(truncation) {
    if (std::abs(z) >= 1.0) throw std::invalid_argument("kernel anchor needs |z| < 1");
    coeff_.resize(N_ + 1);
    for (int k = 0; k <= N_; ++k) coeff_[k] = 1.0 / (2.0 * prof.moment(2 * k + 1));
    int ncap = (prof.moment_count() - 2) / 2;
    floor_coeff_ = 1.0 / (2.0 * prof.moment(2 * std::max(ncap, N_) + 1));
}

cplx KernelSeries::eval(cplx zeta) const {
    const cplx w = zeta * std::conj(z_);
    // Horner over the truncated series
    cplx acc = coeff_[N_];
    for (int k = N_ - 1; k >= 0; --k) acc = acc * w + coeff_[k];
    return acc;
}

double KernelSeries::tail_bound(double rho) const {
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    return std::pow(rho, N_ + 1) / (1.0 - rho) * floor_coeff_;
}

KernelSeries::Result KernelSeries::eval_with_bound(cplx zeta) const {
    const double rho = std::abs(zeta * std::conj(z_));
    if (rho >= 1.0) throw TailNotControlled("kernel series: |zeta conj(z)| >= 1");
    return {eval(zeta), tail_bound(rho)};
}

double kernel_A1_norm(const WeightProfile& prof, cplx z, int truncation, int levels,
                      double tol) {
    KernelSeries ks(prof, z, truncation);
    auto quad = DiskQuadrature::get(levels);
    double rho_max = 0.0;
    for (const auto& ring : quad->rings()) rho_max = std::max(rho_max, ring.r);
    rho_max *= std::abs(z);
    const double scale = ks.coefficients()[0];  // constant-term modulus floor
    if (!(ks.tail_bound(rho_max) <= tol * scale))
        throw TailNotControlled("kernel A1 norm: tail not controlled at this radius");
    return quad->integrate(
        [&](cplx zeta) { return std::abs(ks.eval(zeta)) * prof.density(std::abs(zeta)); });
}

cplx TaylorPolynomial::eval(cplx z) const {
    cplx v = 0.0;
    for (size_t k = c.size(); k-- > 0;) v = v * z + c[k];
    return v;
}

TaylorPolynomial apply_Kn(const TaylorPolynomial& f, int n, double p) {
    if (n < 0) throw std::invalid_argument("apply_Kn needs n >= 0");
    TaylorPolynomial g;
    const size_t keep = std::min<size_t>(f.c.size(), n + 1);
    g.c.assign(f.c.begin(), f.c.begin() + keep);
    if (p == 1.0)
        for (size_t k = 0; k < g.c.size(); ++k)
            g.c[k] *= 1.0 - static_cast<double>(k) / (n + 1.0);
    return g;
}

TaylorPolynomial apply_Rn(const TaylorPolynomial& f, int n, double p) {
    TaylorPolynomial kn = apply_Kn(f, n, p);
    TaylorPolynomial g = f;
    for (size_t k = 0; k < kn.c.size(); ++k) g.c[k] -= kn.c[k];
    return g;
}

double Rn_kernel_coefficient_bound(const WeightProfile& prof, int n, double r, int terms) {
    double first = 0.0, second = 0.0;
    for (int k = 1; k <= terms; ++k) {
        double inv = 1.0 / (2.0 * prof.moment(2 * k + 1));
        first += k * std::pow(r, k - 1) * inv;
        if (k > n) second += std::pow(r, k) * inv;
    }
    return first / n + second;
}

}  // namespace bergman

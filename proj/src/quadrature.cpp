#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "bergman/quad1d.hpp"

namespace bergman {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double t) {
    while (t > kPi) t -= 2.0 * kPi;
    while (t < -kPi) t += 2.0 * kPi;
    return t;
}
}  // namespace

DiskQuadrature::DiskQuadrature(int levels, int gauss_order, int min_angular, int angular_cap)
    : levels_(levels) {
    if (levels < 1 || levels > 16) throw std::invalid_argument("disk quadrature levels in [1,16]");
    const GaussRule& g = gauss_legendre(gauss_order);
    for (int j = 0; j <= levels; ++j) {
        double lo = 1.0 - std::pow(2.0, -j);
        double hi = (j == levels) ? 1.0 : 1.0 - std::pow(2.0, -j - 1);
        int n_ang = static_cast<int>(std::min<long>(64L << j, angular_cap));
        n_ang = std::max(n_ang, min_angular);
        double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (size_t i = 0; i < g.nodes.size(); ++i) {
            double r = mid + half * g.nodes[i];
            rings_.push_back({r, 2.0 * r * g.weights[i] * half, n_ang, j});
        }
    }
}

std::shared_ptr<const DiskQuadrature> DiskQuadrature::get(int levels, int gauss_order,
                                                          int min_angular, int angular_cap) {
    static std::map<std::tuple<int, int, int, int>, std::shared_ptr<const DiskQuadrature>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_tuple(levels, gauss_order, min_angular, angular_cap);
    auto it = cache.find(key);
    if (it == cache.end()) {
        auto q = std::shared_ptr<const DiskQuadrature>(
            new DiskQuadrature(levels, gauss_order, min_angular, angular_cap));
        it = cache.emplace(key, std::move(q)).first;
    }
    return it->second;
}

long DiskQuadrature::node_count() const {
    long n = 0;
    for (const Ring& ring : rings_) n += ring.n_ang;
    return n;
}

double DiskQuadrature::integrate(const std::function<double(cplx)>& f) const {
    double total = 0.0;
    for (const Ring& ring : rings_) {
        double s = 0.0;
        const double step = 2.0 * kPi / ring.n_ang;
        for (int t = 0; t < ring.n_ang; ++t) {
            double v = f(std::polar(ring.r, t * step));
            if (!std::isfinite(v)) throw NonFiniteError("non-finite integrand node");
            s += v;
        }
        total += ring.wr * s / ring.n_ang;
    }
    return total;
}

std::vector<double> DiskQuadrature::integrate_by_cell(const std::function<double(cplx)>& f) const {
    std::vector<double> cells(levels_ + 1, 0.0);
    for (const Ring& ring : rings_) {
        double s = 0.0;
        const double step = 2.0 * kPi / ring.n_ang;
        for (int t = 0; t < ring.n_ang; ++t) {
            double v = f(std::polar(ring.r, t * step));
            if (!std::isfinite(v)) throw NonFiniteError("non-finite integrand node");
            s += v;
        }
        cells[ring.cell] += ring.wr * s / ring.n_ang;
    }
    return cells;
}

IntegralResult integrate_disk(const std::function<double(cplx)>& f, int levels, int gauss_order) {
    auto fine = DiskQuadrature::get(levels, gauss_order);
    auto coarse = DiskQuadrature::get(levels - 1, gauss_order);
    IntegralResult res;
    res.value = fine->integrate(f);
    res.error_estimate = std::abs(res.value - coarse->integrate(f));
    return res;
}

// ---------------------------------------------------------------------------
// Measure

Measure Measure::area() { return Measure{}; }

Measure Measure::warea(std::shared_ptr<const WeightProfile> w) {
    Measure m;
    m.kind_ = Kind::warea;
    m.name_ = "warea:" + w->weight().name();
    m.wprof_ = std::move(w);
    return m;
}

Measure Measure::density(std::string name, std::function<double(cplx)> f, bool radial) {
    Measure m;
    m.kind_ = Kind::density;
    m.name_ = "density:" + name;
    m.dens_ = std::move(f);
    m.radial_ = radial;
    return m;
}

Measure Measure::zero() {
    Measure m;
    m.scale_ = 0.0;
    m.name_ = "zero";
    return m;
}

Measure Measure::with_atoms(std::vector<Atom> atoms) const {
    for (const Atom& a : atoms)
        if (a.mass < 0.0) throw std::invalid_argument("atom masses must be >= 0");
    Measure m = *this;
    m.atoms_ = std::move(atoms);
    return m;
}

Measure Measure::scaled(double s) const {
    Measure m = *this;
    m.scale_ *= s;
    for (Atom& a : m.atoms_) a.mass *= s;
    return m;
}

double Measure::density_at(cplx z) const {
    switch (kind_) {
        case Kind::area:
            return scale_;
        case Kind::warea:
            return scale_ * wprof_->density(std::abs(z));
        case Kind::density: {
            double v = dens_(z);
            if (v < 0.0) throw std::invalid_argument("measure density must be nonnegative");
            return scale_ * v;
        }
    }
    return 0.0;
}

double Measure::box_mass(cplx a) const {
    double v = measure_of_box(*this, a);
    return v;
}

double Measure::pseudo_disk_mass(cplx a, double r) const {
    return measure_of_pseudo_disk(*this, a, r);
}

double Measure::total_mass() const {
    double v = 0.0;
    switch (kind_) {
        case Kind::area:
            v = scale_;
            break;
        case Kind::warea:
            v = scale_ * 2.0 * wprof_->moment(1);
            break;
        case Kind::density:
            v = DiskQuadrature::get(10)->integrate([&](cplx z) { return density_at(z); });
            break;
    }
    for (const Atom& at : atoms_) v += at.mass;
    return v;
}

double measure_of_box(const Measure& mu, cplx a) {
    const double am = std::abs(a);
    if (am >= 1.0) throw std::invalid_argument("box center needs |a| < 1");
    double v = 0.0;
    if (am == 0.0) {
        // S(0) := D
        switch (mu.kind()) {
            case Measure::Kind::area:
                v = mu.scale();
                break;
            case Measure::Kind::warea:
                v = mu.scale() * 2.0 * mu.weight_profile()->moment(1);
                break;
            case Measure::Kind::density:
                v = DiskQuadrature::get(10)->integrate([&](cplx z) { return mu.density_at(z); });
                break;
        }
        for (const Atom& at : mu.atoms()) v += at.mass;
        return v;
    }
    const double width = 1.0 - am;  // |I_a|
    switch (mu.kind()) {
        case Measure::Kind::area:
            v = mu.scale() * width * (1.0 - am * am) / (2.0 * kPi);
            break;
        case Measure::Kind::warea:
            v = mu.scale() * width * mu.weight_profile()->omega_tilde(am) / kPi;
            break;
        case Measure::Kind::density: {
            // boundary-aligned polar panels: dyadic radial refinement toward 1,
            // Gauss nodes along the arc
            const GaussRule& gr = gauss_legendre(8);
            const GaussRule& ga = gauss_legendre(16);
            const double theta = std::arg(a), half = 0.5 * width;
            const int K = 26;
            double acc = 0.0;
            for (int k = 0; k < K; ++k) {
                double r0 = 1.0 - width * std::pow(2.0, -k);
                double r1 = (k == K - 1) ? 1.0 - 1e-14 : 1.0 - width * std::pow(2.0, -k - 1);
                double rm = 0.5 * (r0 + r1), rh = 0.5 * (r1 - r0);
                for (size_t i = 0; i < gr.nodes.size(); ++i) {
                    double r = rm + rh * gr.nodes[i];
                    double wr = gr.weights[i] * rh * r / kPi;
                    double s = 0.0;
                    for (size_t t = 0; t < ga.nodes.size(); ++t)
                        s += ga.weights[t] * half *
                             mu.density_at(std::polar(r, theta + half * ga.nodes[t]));
                    acc += wr * s;
                }
            }
            v = acc;
            break;
        }
    }
    for (const Atom& at : mu.atoms())
        if (in_carleson_box(a, at.pos)) v += at.mass;
    return v;
}

double measure_of_pseudo_disk(const Measure& mu, cplx a, double r) {
    EuclideanDisk disk = pseudo_disk_shape(a, r);
    double v = 0.0;
    switch (mu.kind()) {
        case Measure::Kind::area:
            v = mu.scale() * disk.radius * disk.radius;
            break;
        default: {
            const GaussRule& gr = gauss_legendre(24);
            const int n_ang = 128;
            double acc = 0.0;
            for (size_t i = 0; i < gr.nodes.size(); ++i) {
                double rho = 0.5 * disk.radius * (1.0 + gr.nodes[i]);
                double wr = gr.weights[i] * 0.5 * disk.radius * rho / kPi;
                double s = 0.0;
                for (int t = 0; t < n_ang; ++t) {
                    cplx z = disk.center + std::polar(rho, 2.0 * kPi * t / n_ang);
                    s += (std::abs(z) < 1.0) ? mu.density_at(z) : 0.0;
                }
                acc += wr * s * (2.0 * kPi / n_ang);
            }
            v = acc;
            break;
        }
    }
    for (const Atom& at : mu.atoms())
        if (in_pseudo_disk(a, r, at.pos)) v += at.mass;
    return v;
}

// ---------------------------------------------------------------------------
// Pushforward

double pushforward_total(const Pushforward& pf, const DiskQuadrature& quad) {
    double v = quad.integrate(
        [&](cplx z) { return pf.weight_at(z) * pf.base.density_at(z); });
    for (const Atom& at : pf.base.atoms()) v += at.mass * pf.weight_at(at.pos);
    return v;
}

double pushforward_box(const Pushforward& pf, cplx a, const DiskQuadrature& quad) {
    if (pf.transport_closed && pf.base.closed_box_mass())
        return pf.transport_scale * pf.base.box_mass(a);
    double v = quad.integrate([&](cplx z) {
        return in_carleson_box(a, pf.phi.eval(z)) ? pf.weight_at(z) * pf.base.density_at(z)
                                                  : 0.0;
    });
    for (const Atom& at : pf.base.atoms())
        if (in_carleson_box(a, pf.phi.eval(at.pos))) v += at.mass * pf.weight_at(at.pos);
    return v;
}

double pushforward_pseudo_disk(const Pushforward& pf, cplx a, double r,
                               const DiskQuadrature& quad) {
    double v = quad.integrate([&](cplx z) {
        return in_pseudo_disk(a, r, pf.phi.eval(z)) ? pf.weight_at(z) * pf.base.density_at(z)
                                                    : 0.0;
    });
    for (const Atom& at : pf.base.atoms())
        if (in_pseudo_disk(a, r, pf.phi.eval(at.pos))) v += at.mass * pf.weight_at(at.pos);
    return v;
}

std::vector<Atom> atomize(const Pushforward& pf, const DiskQuadrature& quad) {
    std::vector<Atom> atoms;
    atoms.reserve(quad.node_count() + pf.base.atoms().size());
    for (const auto& ring : quad.rings()) {
        const double step = 2.0 * kPi / ring.n_ang;
        for (int t = 0; t < ring.n_ang; ++t) {
            cplx z = std::polar(ring.r, t * step);
            double m = ring.wr / ring.n_ang * pf.weight_at(z) * pf.base.density_at(z);
            if (m != 0.0) atoms.push_back({pf.phi.eval(z), m});
        }
    }
    for (const Atom& at : pf.base.atoms()) {
        double m = at.mass * pf.weight_at(at.pos);
        if (m != 0.0) atoms.push_back({pf.phi.eval(at.pos), m});
    }
    return atoms;
}

}  // namespace bergman

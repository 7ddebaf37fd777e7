#include "bergman/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {
constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double t) {
    while (t > kPi) t -= 2.0 * kPi;
    while (t < -kPi) t += 2.0 * kPi;
    return t;
}
}  // namespace

cplx mobius(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

bool in_carleson_box(cplx a, cplx z) {
    const double am = std::abs(a);
    if (am == 0.0) return std::abs(z) < 1.0;  // S(0) := D
    if (am >= 1.0) throw std::invalid_argument("carleson box center must satisfy |a| < 1");
    const double r = std::abs(z);
    if (r < am || r >= 1.0) return false;
    const double half = 0.5 * (1.0 - am);
    return std::abs(wrap_angle(std::arg(z) - std::arg(a))) <= half;
}

bool in_pseudo_disk(cplx a, double r, cplx z) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("pseudo disk needs 0 < r < 1");
    return std::abs(mobius(a, z)) < r;
}

EuclideanDisk pseudo_disk_shape(cplx a, double r) {
    const double am2 = std::norm(a);
    const double denom = 1.0 - r * r * am2;
    return {a * ((1.0 - r * r) / denom), r * (1.0 - am2) / denom};
}

bool in_stolz(cplx a, cplx z) {
    if (std::abs(a) == 0.0) throw std::invalid_argument("stolz region needs a != 0");
    const double zm = std::abs(z);
    const double gap = 0.5 * (1.0 - zm / std::abs(a));
    if (zm == 0.0) return 0.0 < gap;  // arg 0 read as arg a
    return std::abs(wrap_angle(std::arg(z) - std::arg(a))) < gap;
}

bool in_tent(cplx a, cplx z) {
    if (std::abs(z) == 0.0) return false;  // Gamma(0) is empty of nonzero points
    return in_stolz(z, a);
}

double blaschke_bound(const BlaschkeData& d) {
    return d.m + 2.0 * d.n * (1.0 + d.d) / (1.0 - d.d);
}

// ---------------------------------------------------------------------------
// AnalyticMap

AnalyticMap AnalyticMap::blaschke(int m, std::vector<cplx> zeros, cplx unimodular) {
    if (m < 0) throw std::invalid_argument("blaschke power must be >= 0");
    if (std::abs(std::abs(unimodular) - 1.0) > 1e-12)
        throw std::invalid_argument("blaschke factor must be unimodular");
    for (cplx a : zeros)
        if (std::abs(a) >= 1.0 || std::abs(a) == 0.0)
            throw std::invalid_argument("blaschke zeros need 0 < |a| < 1");
    AnalyticMap f;
    f.kind_ = Kind::blaschke;
    f.m_ = m;
    f.zeros_ = std::move(zeros);
    f.unimodular_ = unimodular;
    f.self_map_ = true;
    return f;
}

AnalyticMap AnalyticMap::polynomial(std::vector<cplx> coeffs) {
    while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.empty()) coeffs.push_back(0.0);
    AnalyticMap f;
    f.kind_ = Kind::polynomial;
    f.coeffs_ = std::move(coeffs);
    f.check_self_map();
    return f;
}

AnalyticMap AnalyticMap::affine(cplx c0, cplx c1) {
    AnalyticMap f;
    f.kind_ = Kind::affine;
    f.coeffs_ = {c0, c1};
    f.check_self_map();
    return f;
}

AnalyticMap AnalyticMap::reciprocal_power(cplx w, double alpha) {
    if (std::abs(w) >= 1.0) throw std::invalid_argument("reciprocal_power needs |w| < 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("reciprocal_power needs alpha > 0");
    AnalyticMap f;
    f.kind_ = Kind::reciprocal_power;
    f.w_ = w;
    f.alpha_ = alpha;
    f.self_map_ = false;
    return f;
}

AnalyticMap AnalyticMap::composition(std::vector<AnalyticMap> maps) {
    if (maps.empty()) throw std::invalid_argument("composition needs at least one map");
    AnalyticMap f;
    f.kind_ = Kind::composition;
    bool self_map = true;
    for (const auto& g : maps) self_map = self_map && g.self_map();
    f.parts_ = std::move(maps);
    f.self_map_ = self_map;
    return f;
}

void AnalyticMap::check_self_map() {
    double sup = 0.0;
    for (int t = 0; t < 512; ++t) {
        cplx z = std::polar(1.0, 2.0 * kPi * t / 512.0);
        sup = std::max(sup, std::abs(eval(z)));
    }
    if (sup > 1.0 + 1e-12)
        throw std::invalid_argument("map is not a self-map of the disk (sup |phi| = " +
                                    std::to_string(sup) + ")");
    self_map_ = true;
}

cplx AnalyticMap::eval(cplx z) const {
    switch (kind_) {
        case Kind::blaschke: {
            cplx v = unimodular_;
            for (int k = 0; k < m_; ++k) v *= z;
            for (cplx a : zeros_)
                v *= (std::abs(a) / a) * (a - z) / (1.0 - std::conj(a) * z);
            return v;
        }
        case Kind::polynomial:
        case Kind::affine: {
            cplx v = 0.0;
            for (size_t k = coeffs_.size(); k-- > 0;) v = v * z + coeffs_[k];
            return v;
        }
        case Kind::reciprocal_power: {
            cplx base = 1.0 / (1.0 - std::conj(w_) * z);
            return std::pow(base, cplx(alpha_, 0.0));
        }
        case Kind::composition: {
            cplx v = z;
            for (auto it = parts_.rbegin(); it != parts_.rend(); ++it) v = it->eval(v);
            return v;
        }
    }
    return 0.0;
}

bool AnalyticMap::is_polynomial() const {
    switch (kind_) {
        case Kind::polynomial:
        case Kind::affine:
            return true;
        case Kind::blaschke:
            return zeros_.empty();  // lambda z^m
        case Kind::composition:
            return std::all_of(parts_.begin(), parts_.end(),
                               [](const AnalyticMap& g) { return g.is_polynomial(); });
        default:
            return false;
    }
}

std::vector<cplx> AnalyticMap::taylor_coefficients() const {
    switch (kind_) {
        case Kind::polynomial:
        case Kind::affine:
            return coeffs_;
        case Kind::blaschke: {
            if (!zeros_.empty())
                throw std::invalid_argument("blaschke product with zeros is not a polynomial");
            std::vector<cplx> c(m_ + 1, 0.0);
            c[m_] = unimodular_;
            return c;
        }
        case Kind::composition: {
            std::vector<cplx> acc = parts_.back().taylor_coefficients();
            for (size_t i = parts_.size() - 1; i-- > 0;) {
                auto outer = parts_[i].taylor_coefficients();
                // evaluate outer at the polynomial acc
                std::vector<cplx> res{0.0};
                for (size_t k = outer.size(); k-- > 0;) {
                    // res = res*acc + outer[k]
                    std::vector<cplx> next(res.size() + acc.size() - 1, 0.0);
                    for (size_t i1 = 0; i1 < res.size(); ++i1)
                        for (size_t i2 = 0; i2 < acc.size(); ++i2)
                            next[i1 + i2] += res[i1] * acc[i2];
                    if (next.empty()) next.push_back(0.0);
                    next[0] += outer[k];
                    res = std::move(next);
                }
                acc = std::move(res);
            }
            while (acc.size() > 1 && std::abs(acc.back()) == 0.0) acc.pop_back();
            return acc;
        }
        default:
            throw std::invalid_argument("map is not a polynomial");
    }
}

int AnalyticMap::degree() const {
    auto c = taylor_coefficients();
    int d = 0;
    for (size_t k = 0; k < c.size(); ++k)
        if (std::abs(c[k]) > 0.0) d = static_cast<int>(k);
    return d;
}

bool AnalyticMap::is_monomial(int* power, cplx* coeff) const {
    if (!is_polynomial()) return false;
    auto c = taylor_coefficients();
    int nz = -1;
    for (size_t k = 0; k < c.size(); ++k) {
        if (std::abs(c[k]) > 0.0) {
            if (nz >= 0) return false;
            nz = static_cast<int>(k);
        }
    }
    if (nz < 0) nz = 0;  // zero map counts as 0 * z^0
    if (power) *power = nz;
    if (coeff) *coeff = c.size() > static_cast<size_t>(nz) ? c[nz] : cplx(0.0);
    return true;
}

BlaschkeData AnalyticMap::blaschke_data() const {
    if (kind_ != Kind::blaschke)
        throw std::invalid_argument("blaschke_data needs a blaschke product");
    BlaschkeData d;
    d.m = m_;
    d.n = static_cast<int>(zeros_.size());
    if (!zeros_.empty()) {
        d.c = 0.0;
        d.d = 1.0;
        for (cplx a : zeros_) {
            d.c = std::max(d.c, std::abs(a));
            d.d = std::min(d.d, std::abs(a));
        }
    }
    return d;
}

std::string AnalyticMap::describe() const {
    switch (kind_) {
        case Kind::blaschke: {
            std::string s = "blaschke:m=" + std::to_string(m_);
            if (!zeros_.empty()) {
                s += ";zeros=";
                for (size_t i = 0; i < zeros_.size(); ++i) {
                    if (i) s += ",";
                    s += std::to_string(zeros_[i].real()) + "+" +
                         std::to_string(zeros_[i].imag()) + "i";
                }
            }
            return s;
        }
        case Kind::polynomial:
        case Kind::affine: {
            std::string s = kind_ == Kind::affine ? "affine:" : "poly:";
            for (size_t i = 0; i < coeffs_.size(); ++i) {
                if (i) s += ",";
                if (coeffs_[i].imag() == 0.0)
                    s += std::to_string(coeffs_[i].real());
                else
                    s += std::to_string(coeffs_[i].real()) + "+" +
                         std::to_string(coeffs_[i].imag()) + "i";
            }
            return s;
        }
        case Kind::reciprocal_power:
            return "recip:w=" + std::to_string(w_.real()) + "+" + std::to_string(w_.imag()) +
                   "i;alpha=" + std::to_string(alpha_);
        case Kind::composition:
            return "composition(" + std::to_string(parts_.size()) + ")";
    }
    return "";
}

std::vector<double> boundary_modulus_profile(const AnalyticMap& phi,
                                             const std::vector<double>& radii, int angles) {
    std::vector<double> out;
    out.reserve(radii.size());
    for (double r : radii) {
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("boundary_modulus_profile radii must lie in (0,1)");
        double mn = 1e300;
        for (int t = 0; t < angles; ++t)
            mn = std::min(mn, std::abs(phi.eval(std::polar(r, 2.0 * kPi * t / angles))));
        out.push_back(mn);
    }
    return out;
}

}  // namespace bergman

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;

// (a - z)/(1 - conj(a) z); maps D onto D, involution for |a| < 1.
cplx mobius(cplx a, cplx z);

// Carleson square S(a): radial range [|a|, 1), angular half-width (1-|a|)/2
// about arg a (both inclusive). S(0) is the whole disk by convention.
bool in_carleson_box(cplx a, cplx z);

// Pseudo-hyperbolic disk |(a-z)/(1 - conj(a) z)| < r (strict).
bool in_pseudo_disk(cplx a, double r, cplx z);

// Euclidean image of the pseudo-hyperbolic disk.
struct EuclideanDisk {
    cplx center;
    double radius;
};
EuclideanDisk pseudo_disk_shape(cplx a, double r);

// Stolz region Gamma(a) = { z : |arg z - arg a| < (1 - |z|/|a|)/2 }, a != 0.
// arg 0 is read as arg a, so 0 lies in every Gamma(a).
bool in_stolz(cplx a, cplx z);

// Tent T(a) = { z : a in Gamma(z) }.
bool in_tent(cplx a, cplx z);

struct BlaschkeData {
    int m = 0;          // monomial power
    int n = 0;          // number of Mobius factors
    double c = 0.0;     // max |a_k|
    double d = 0.0;     // min |a_k|
};

// m + 2n(1+d)/(1-d); for c < |z| < 1 it dominates (1-|phi(z)|^2)/(1-|z|^2).
double blaschke_bound(const BlaschkeData& data);

// Analytic map of the disk: multiplier families and self-map symbols.
// Polynomial and affine variants are rejected at construction when a boundary
// sample shows sup |phi| > 1 + 1e-12, so they can serve as symbols phi.
// The reciprocal-power family (1/(1 - conj(w) z))^alpha is a multiplier and
// skips that check.
class AnalyticMap {
  public:
    enum class Kind { blaschke, polynomial, affine, reciprocal_power, composition };

    static AnalyticMap blaschke(int m, std::vector<cplx> zeros, cplx unimodular = 1.0);
    static AnalyticMap polynomial(std::vector<cplx> coeffs);  // c0 + c1 z + ...
    static AnalyticMap affine(cplx c0, cplx c1);
    static AnalyticMap reciprocal_power(cplx w, double alpha);
    static AnalyticMap composition(std::vector<AnalyticMap> maps);
    static AnalyticMap identity() { return polynomial({0.0, 1.0}); }
    static AnalyticMap constant(cplx c) { return polynomial({c}); }

    Kind kind() const { return kind_; }
    cplx eval(cplx z) const;
    cplx operator()(cplx z) const { return eval(z); }

    bool self_map() const { return self_map_; }
    bool is_polynomial() const;
    // Taylor coefficients; throws for non-polynomial variants.
    std::vector<cplx> taylor_coefficients() const;
    int degree() const;
    // c * z^k form (constant counts with k = 0); needed for the rotation
    // shortcut in radial grid scans.
    bool is_monomial(int* power = nullptr, cplx* coeff = nullptr) const;

    BlaschkeData blaschke_data() const;
    const std::vector<cplx>& zeros() const { return zeros_; }
    int monomial_power() const { return m_; }

    std::string describe() const;

  private:
    AnalyticMap() = default;
    void check_self_map();

    Kind kind_ = Kind::polynomial;
    int m_ = 0;
    std::vector<cplx> zeros_;
    cplx unimodular_ = 1.0;
    std::vector<cplx> coeffs_;
    cplx w_ = 0.0;
    double alpha_ = 1.0;
    std::vector<AnalyticMap> parts_;
    bool self_map_ = false;
};

// min over `angles` equally spaced points of |phi(r e^{i t})|, one entry per
// radius.
std::vector<double> boundary_modulus_profile(const AnalyticMap& phi,
                                             const std::vector<double>& radii,
                                             int angles = 4096);

}  // namespace bergman

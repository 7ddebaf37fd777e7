#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct NonFiniteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Polar product rule on the unit disk under normalized area. Radial cells
// refine dyadically toward the boundary (boundaries 1 - 2^-j); each cell
// carries fixed-order Gauss nodes and min(64 * 2^j, cap) equispaced angles.
class DiskQuadrature {
  public:
    struct Ring {
        double r;
        double wr;  // radial weight including the 2r Jacobian; sum wr = 1
        int n_ang;
        int cell;
    };

    // Cached factory; instances are immutable and shared.
    static std::shared_ptr<const DiskQuadrature> get(int levels, int gauss_order = 8,
                                                     int min_angular = 0,
                                                     int angular_cap = 8192);

    int levels() const { return levels_; }
    const std::vector<Ring>& rings() const { return rings_; }
    long node_count() const;

    // Fixed-order evaluation; deterministic summation (rings in order,
    // pairwise within a ring). Throws NonFiniteError on NaN/inf nodes.
    double integrate(const std::function<double(cplx)>& f) const;
    // Partial sums per dyadic cell 0..levels (cumulative diagnostics).
    std::vector<double> integrate_by_cell(const std::function<double(cplx)>& f) const;

  private:
    DiskQuadrature(int levels, int gauss_order, int min_angular, int angular_cap);
    int levels_;
    std::vector<Ring> rings_;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;  // |value_J - value_{J-1}|
};

// Integral with a Richardson-style error estimate from the previous level.
IntegralResult integrate_disk(const std::function<double(cplx)>& f, int levels,
                              int gauss_order = 8);

struct Atom {
    cplx pos;
    double mass;
};

// Positive Borel measure: absolutely continuous part (area density w.r.t.
// normalized area) plus finitely many atoms.
class Measure {
  public:
    enum class Kind { area, warea, density };

    static Measure area();
    static Measure warea(std::shared_ptr<const WeightProfile> w);
    static Measure density(std::string name, std::function<double(cplx)> f, bool radial);
    static Measure zero();

    Measure with_atoms(std::vector<Atom> atoms) const;

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    double density_at(cplx z) const;
    bool radial() const { return radial_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::shared_ptr<const WeightProfile>& weight_profile() const { return wprof_; }
    double scale() const { return scale_; }
    Measure scaled(double s) const;

    bool closed_box_mass() const { return kind_ != Kind::density; }
    // mu(S(a)); atoms on the rim count per the box's inclusive inequalities.
    double box_mass(cplx a) const;
    // mu(Delta(a, r)); atoms on the rim are excluded (strict inequality).
    double pseudo_disk_mass(cplx a, double r) const;
    double total_mass() const;

  private:
    Kind kind_ = Kind::area;
    std::string name_ = "area";
    std::shared_ptr<const WeightProfile> wprof_;
    std::function<double(cplx)> dens_;
    bool radial_ = true;
    double scale_ = 1.0;
    std::vector<Atom> atoms_;
};

// Region measure dispatch (boundary-aligned panels for density measures).
double measure_of_box(const Measure& mu, cplx a);
double measure_of_pseudo_disk(const Measure& mu, cplx a, double r);

// Pushforward nu(E) = int 1_E(phi(z)) |u(z)|^q d(base)(z). Membership is
// always evaluated by composing the indicator with phi.
struct Pushforward {
    std::function<cplx(cplx)> u;
    AnalyticMap phi = AnalyticMap::identity();
    Measure base;
    double q = 2.0;
    // When phi = id and |u| is constant, nu = |u|^q * base and box masses
    // stay closed-form.
    bool transport_closed = false;
    double transport_scale = 1.0;

    double weight_at(cplx z) const { return std::pow(std::abs(u(z)), q); }
};

double pushforward_total(const Pushforward& pf, const DiskQuadrature& quad);
double pushforward_box(const Pushforward& pf, cplx a, const DiskQuadrature& quad);
double pushforward_pseudo_disk(const Pushforward& pf, cplx a, double r,
                               const DiskQuadrature& quad);

// Quadrature atoms of the pushforward (positions phi(z_i), masses
// w_i |u|^q dens). Base atoms map along.
std::vector<Atom> atomize(const Pushforward& pf, const DiskQuadrature& quad);

}  // namespace bergman

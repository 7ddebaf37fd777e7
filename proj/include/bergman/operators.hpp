#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/spaces.hpp"
#include "bergman/weights.hpp"

namespace bergman {

enum class FuncFlag {
    ok,
    divergent,
    hypothesis_failed,
    truncation_warning,
    tail_not_controlled,
    exponent_gap_violated,
};

const char* to_string(FuncFlag f);

struct FunctionalReport {
    double value = 0.0;
    cplx witness = 0.0;
    std::string grid_desc;
    std::vector<double> levels;
    double wall_time_ms = 0.0;
    FuncFlag flag = FuncFlag::ok;
};

// Weighted composition operator data: (u C_phi f)(z) = u(z) f(phi(z)),
// measured against mu, acting from A_omega^p.
struct OperatorSpec {
    std::shared_ptr<const WeightProfile> profile;
    std::function<cplx(cplx)> u;
    std::optional<AnalyticMap> u_map;  // set when u is one of the map families
    AnalyticMap phi = AnalyticMap::identity();
    Measure mu = Measure::area();
    double p = 2.0, q = 2.0;
    double gamma = -1.0;  // negative -> default_gamma(p)

    static OperatorSpec make(std::shared_ptr<const WeightProfile> profile, AnalyticMap u,
                             AnalyticMap phi, Measure mu, double p, double q,
                             double gamma = -1.0);

    double gamma_eff() const { return gamma < 0.0 ? default_gamma(p) : gamma; }
    // Grid scans collapse to one angle per radius when |u|, mu are radial and
    // phi is a monomial.
    bool radially_covariant() const;
    Pushforward nu() const;     // |u|^q dmu transported by phi
    Pushforward sigma() const;  // |u|^2 omega dA transported by phi
};

// Dyadic a-grid: radii 1 - 2^-j with min(64 * 2^j, cap) angles per level.
struct AGrid {
    int j_min = 1;
    int j_max = 10;
    int angular_cap = 4096;

    int n_ang(int j) const;
    std::string describe() const;
};

// sup_a mu(S(a)) / omega(S(a))^{q/p} over the grid (plus a = 0).
FunctionalReport carleson_constant(const Measure& mu, const WeightProfile& prof, double p,
                                   double q, const AGrid& grid);

// sup_a int |F_{a,p,gamma}(phi(z))|^q |u|^q dmu.
FunctionalReport boundedness_functional(const OperatorSpec& spec, const AGrid& grid,
                                        int levels = 10);

// Tail sup over |a| = 1 - 2^-j, j = j_min..j_max; value is the max of the
// last three level maxima (limsup estimator), all levels reported.
FunctionalReport essential_norm_functional(const OperatorSpec& spec, const AGrid& tail_grid,
                                           int levels = 10);

// (N_r^*, sup_a nu_r(S(a))/omega(S(a))^{q/p}) for nu_r = nu restricted off rD.
struct RestrictedReport {
    double n_star = 0.0;
    double restricted_sup = 0.0;
};
RestrictedReport restricted_constant(const OperatorSpec& spec, double r, const AGrid& grid,
                                     int levels = 10);

// Psi(a) = int |F_{a,p,gamma}(phi)|^p |u|^q dmu (exponent q in switch mode).
double psi_functional(const OperatorSpec& spec, cplx a, int levels = 10,
                      bool exponent_switch = false);
// || Psi ||_{L_omega^{p/(p-q)}} over an outer disk grid; requires q < p.
FunctionalReport psi_mixed_norm(const OperatorSpec& spec, int outer_levels = 6,
                                int inner_levels = 8, bool exponent_switch = false);

// Remark-2 functionals (box masses stand in for the comparable tent masses).
struct Remark2Report {
    FunctionalReport m_norm;  // ||M_omega(nu)||
    FunctionalReport q_norm;  // ||Q||
};
Remark2Report remark2_functionals(const OperatorSpec& spec, const AGrid& box_grid,
                                  int outer_levels = 6, int inner_levels = 8);

// Experimental: Phi_r(z) = int_{Gamma(z)} [nu(Delta(xi,r))/omega-box(xi)]
// dA(xi)/(1-|xi|)^2, mixed norm as above. Coarse grids; diagnostics only.
FunctionalReport phi_r_functional(const OperatorSpec& spec, double r, int outer_levels = 4,
                                  int inner_levels = 6);

// int ( sigma(Delta(z,r)) / omega_*(z) )^{p/2} dA(z)/(1-|z|^2)^2, gated on
// the log^2 integrability of the weight.
FunctionalReport schatten_functional(const OperatorSpec& spec, double p_schatten, double r,
                                     int outer_levels = 8, int inner_levels = 8);

// int (log e/(1-t))^2 omega(t) dt with a doubling-window convergence check.
struct LogSqIntegral {
    double value = 0.0;
    bool converged = false;
};
LogSqIntegral log_sq_integral(const WeightProfile& prof);

// Matrix truncation of u C_phi against e_k = z^k / sqrt(2 omega_{2k+1}).
// Entries come from exact Taylor-coefficient convolutions (polynomial u,
// phi); rows extend to the polynomial closure degree so columns are exact.
struct MatrixOracle {
    int rows = 0, cols = 0;          // cols = N + 1 basis functions
    std::vector<cplx> entries;       // row-major
    std::vector<double> sv;          // sorted descending
    bool truncation_warning = false;

    cplx at(int j, int k) const { return entries[static_cast<size_t>(j) * cols + k]; }
    double op_norm() const { return sv.empty() ? 0.0 : sv.front(); }
    double schatten_norm(double p) const;
    double hs_norm_sq() const;
};
MatrixOracle matrix_oracle(const AnalyticMap& u, const AnalyticMap& phi,
                           const WeightProfile& prof, int N, int max_rows = 4096);

// Toeplitz matrix <T_sigma e_k, e_j> = int e_k conj(e_j) dsigma via the
// pushforward quadrature; (N+1)^2 row-major.
std::vector<cplx> toeplitz_matrix(const AnalyticMap& u, const AnalyticMap& phi,
                                  const WeightProfile& prof, int N, int levels = 10,
                                  int gauss_order = 6);

// Theorem-5 shape: sup over the z-grid of omega(S(phi(z)))/omega(S(z)) and
// its (p'-1)-power, against the Blaschke-derived constant.
struct MultiplierBoundReport {
    double sup_ratio = 0.0;
    double sup_shape = 0.0;  // sup ratio^{p'-1}
    double sup_u = 0.0;
    cplx witness = 0.0;
    double blaschke_constant = 0.0;  // m + 2n(1+d)/(1-d)
    double implied_constant = 0.0;   // max(K, K^{b_exp})
};
MultiplierBoundReport multiplier_bound_profile(const std::function<cplx(cplx)>& u,
                                               const AnalyticMap& phi,
                                               const WeightProfile& prof, double p,
                                               const AGrid& z_grid);

// sup over 0 <= r <= t < 1 of omega-hat(phi_t(r)) omega-hat(r) / omega-hat(t).
FunctionalReport thm6_condition_i(const WeightProfile& prof, int t_levels = 12,
                                  int t_subpoints = 4, int theta_count = 65);

// Lower-bound experiment: both sides of
// (1-|w|^2)^{-(2a+2-b)} <~ 1/((1-|phi(w)|) omega-hat(phi(w))).
struct Thm6Experiment {
    bool ok = false;  // exponent gap 2a+2-b > 0 found
    double a = 0.0, b = 0.0, eps = 0.0;
    std::vector<double> w_modulus, phi_min_modulus, lhs, rhs;
    double ratio_min = 0.0, ratio_max = 0.0;
    double final_phi_modulus = 0.0;
};
Thm6Experiment thm6_lower_bound_experiment(const WeightProfile& prof, const AnalyticMap& phi,
                                           double p, int j_max = 10, int angles = 16);

// inf over the dyadic (r,t) grid of
// log(e(1-rt)/((1-t)(1+r))) log(e/(1-r)) / log(e/(1-t)).
double corollary7_C1(int t_levels = 14, int t_subpoints = 4, int theta_count = 65,
                     std::pair<double, double>* witness = nullptr);

// (log(e(1-rt)/((1-t)(1+r))))^alpha + (log(e/(1-r)))^alpha >= (log(e/(1-t)))^alpha
// at every grid point; 0 < alpha <= 1.
bool corollary7_condition_b(double alpha, int t_levels = 14, int t_subpoints = 4,
                            int theta_count = 65);

}  // namespace bergman

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct TailNotControlled : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gamma = max(4p - 1, 9): keeps the exponent (gamma+1)/p at 4 or above.
double default_gamma(double p);

// F_{a,p,gamma}(z) = ((1-|a|^2)/(1 - conj(a) z))^{(gamma+1)/p} omega(S(a))^{-1/p}
struct TestFunction {
    cplx a;
    double p = 2.0;
    double gamma = 9.0;
    double box_mass = 1.0;  // omega(S(a))

    static TestFunction make(const WeightProfile& prof, cplx a, double p, double gamma = -1.0);
    cplx eval(cplx z) const;       // principal branch
    double abs_value(cplx z) const;
};

// (int |f|^p omega dA)^{1/p} on the disk quadrature.
double norm_Ap(const std::function<cplx(cplx)>& f, const WeightProfile& prof, double p,
               int levels = 10, int gauss_order = 8);

// <f, g>_{A_omega^2} = int f conj(g) omega dA
cplx inner_product_A2(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g,
                      const WeightProfile& prof, int levels = 10, int gauss_order = 8);

// Truncated reproducing-kernel series B_z(zeta) = sum (zeta conj(z))^k / (2 omega_{2k+1}).
class KernelSeries {
  public:
    KernelSeries(const WeightProfile& prof, cplx z, int truncation = 512);

    cplx anchor() const { return z_; }
    int truncation() const { return N_; }

    cplx eval(cplx zeta) const;
    // Dropped-remainder bound at |zeta conj(z)| <= rho, using the largest
    // cached moment as a conservative coefficient floor.
    double tail_bound(double rho) const;
    struct Result {
        cplx value;
        double tail;
    };
    Result eval_with_bound(cplx zeta) const;  // throws TailNotControlled at rho >= 1

    const std::vector<double>& coefficients() const { return coeff_; }

  private:
    cplx z_;
    int N_;
    std::vector<double> coeff_;   // 1/(2 omega_{2k+1}), k = 0..N
    double floor_coeff_;          // 1/(2 omega_{2 Ncap + 1})
};

// ||B_z||_{A_omega^1} diagnostic; throws TailNotControlled when the series
// tail cannot be brought under `tol` relative to the constant-term scale.
double kernel_A1_norm(const WeightProfile& prof, cplx z, int truncation = 512,
                      int levels = 10, double tol = 1e-3);

struct TaylorPolynomial {
    std::vector<cplx> c;  // c[k] multiplies z^k

    cplx eval(cplx z) const;
    int degree() const { return c.empty() ? 0 : static_cast<int>(c.size()) - 1; }
};

// K_n: hard truncation at degree n for p > 1, Cesaro-damped truncation
// (1 - k/(n+1)) for p = 1.
TaylorPolynomial apply_Kn(const TaylorPolynomial& f, int n, double p);
// R_n = Id - K_n.
TaylorPolynomial apply_Rn(const TaylorPolynomial& f, int n, double p);

// Coefficient-side bound on ||R_n B_w||_{H^inf} for |w| <= r:
// (1/n) sum_{k>=1} k r^{k-1}/(2 omega_{2k+1}) + sum_{k>n} r^k/(2 omega_{2k+1}).
double Rn_kernel_coefficient_bound(const WeightProfile& prof, int n, double r,
                                   int terms = 4000);

}  // namespace bergman

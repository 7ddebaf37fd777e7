#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace bergman {

enum class WeightKind {
    standard,        // (1-r)^alpha, alpha > -1
    log_power,       // (1-r)^alpha (log e/(1-r))^beta
    exponential,     // exp(-beta (log e/(1-r))^alpha)
    oscillating,     // |sin(log 1/(1-r))| v_{-1,-2}(r) + 1
    custom_sampled,  // log-linear interpolation of (r, w) rows, power-law tail
    custom_density,  // arbitrary positive density (library/test use)
};

// Radial weight density on [0, 1). Positivity and integrability are checked
// at construction.
class Weight {
  public:
    static Weight standard(double alpha);
    static Weight log_power(double alpha, double beta);
    static Weight exponential(double alpha, double beta);
    static Weight oscillating();
    static Weight custom_sampled(std::vector<std::pair<double, double>> nodes);
    // tail_decay: the density behaves like (1-r)^tail_decay near 1 (used to
    // size the integration window).
    static Weight custom_density(std::string name, std::function<double(double)> f,
                                 double tail_decay);

    WeightKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const std::string& name() const { return name_; }

    double density(double r) const;        // r in [0, 1)
    double density_om(double om) const;    // om = 1 - r in (0, 1]

    // Integrand of int w(s) ds in the variable x = log(e/(1-s)), x >= 1.
    double gfun(double x) const;
    // Analytic tail of int_X^inf gfun once X is past the cut returned by x_cut.
    double hat_tail(double X) const;
    // Upper integration endpoint for the numeric part; x_req is the largest
    // x the integrand's non-weight factors need resolved (1 for plain tails).
    double x_cut(double x0, double x_req) const;
    // Panel boundaries for kinks (|sin| corners, sample nodes).
    std::vector<double> breaks(double x0, double x1) const;

  private:
    Weight() = default;
    void validate();

    WeightKind kind_ = WeightKind::standard;
    double alpha_ = 0.0, beta_ = 0.0;
    std::string name_;
    std::vector<std::pair<double, double>> nodes_;  // sampled: (r, w), r ascending
    double tail_c_ = 1.0, tail_p_ = 0.0;            // fitted power tail w ~ C (1-r)^p
    std::function<double(double)> fn_;
    double fn_decay_ = 0.0;
};

enum class WeightClass { regular, rapidly_increasing, inconclusive };

struct ClassifyOptions {
    int j_max = 12;        // dyadic analysis levels 1..j_max
    int subpoints = 8;     // equispaced refinements per level
    int tail_levels = 3;   // window for liminf/limsup estimates
    double bounded_ratio = 50.0;
    double trend_threshold = 1.3;
    int moment_count = 1026;  // omega_0 .. omega_{2N+1} with kernel N = 512
};

// Immutable bundle of a weight with its derived functionals and the numeric
// classification. Safe to share across threads after construction.
class WeightProfile {
  public:
    explicit WeightProfile(Weight w, ClassifyOptions opts = {});

    const Weight& weight() const { return w_; }
    const ClassifyOptions& options() const { return opts_; }

    double density(double r) const { return w_.density(r); }
    double omega_hat(double r) const;    // int_r^1 w(s) ds
    double omega_tilde(double r) const;  // int_r^1 s w(s) ds
    double omega_star(double r) const;   // int_r^1 s w(s) log(s/r) ds, r > 0
    double moment(int n) const;          // omega_n = int_0^1 s^n w(s) ds
    int moment_count() const { return static_cast<int>(moments_.size()); }

    // omega(S(a)) under normalized area; S(0) := D.
    double box_mass_at(double a_modulus) const;
    double disk_mass() const { return 2.0 * moment(1); }

    // Classification results.
    WeightClass cls() const { return cls_; }
    bool regular() const { return cls_ == WeightClass::regular; }
    bool rapidly_increasing() const { return cls_ == WeightClass::rapidly_increasing; }
    bool inconclusive() const { return cls_ == WeightClass::inconclusive; }
    double reg_lo() const { return reg_lo_; }
    double reg_hi() const { return reg_hi_; }
    double dd_constant() const { return dd_constant_; }
    double A() const { return A_; }
    double B() const { return B_; }
    bool condition_ii() const { return condition_ii_; }
    bool exponents_found() const { return exponents_found_; }
    double a_exp() const { return a_exp_; }
    double b_exp() const { return b_exp_; }
    double delta() const { return delta_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<int>& grid_level() const { return grid_level_; }

    // Exponents a = 1/(B+eps)-1, b = 1/(A-eps)-1 with eps shrunk until the
    // gap 2a+2-b is positive; ok=false when no eps works.
    struct GapExponents { double a = 0, b = 0, eps = 0; bool ok = false; };
    GapExponents gap_exponents() const;

  private:
    double integrate_tail(double x0, const std::function<double(double)>& factor,
                          double x_req) const;
    void classify();

    Weight w_;
    ClassifyOptions opts_;
    std::vector<double> moments_;
    std::vector<double> grid_;
    std::vector<int> grid_level_;

    WeightClass cls_ = WeightClass::inconclusive;
    double reg_lo_ = 0, reg_hi_ = 0, dd_constant_ = 0, A_ = 0, B_ = 0;
    bool condition_ii_ = false;
    bool exponents_found_ = false;
    double a_exp_ = 0, b_exp_ = 0, delta_ = 0;

    mutable std::mutex memo_mtx_;
    mutable std::map<double, double> hat_memo_;
    mutable std::map<double, double> tilde_memo_;
    mutable std::map<double, double> star_memo_;
};

}  // namespace bergman

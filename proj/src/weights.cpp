#include "bergman/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bergman/quad1d.hpp"

namespace bergman {

namespace {
constexpr double kPi = 3.14159265358979323846;
// mean of S2(t) = t - sin t - t^2/pi over one |sin| period
const double kM2 = kPi / 6.0 - 2.0 / kPi;

double om_of_x(double x) { return std::exp(1.0 - x); }
double s_of_x(double x) { return -std::expm1(1.0 - x); }
}  // namespace

Weight Weight::standard(double alpha) {
    if (alpha <= -1.0) throw std::invalid_argument("standard weight needs alpha > -1");
    Weight w;
    w.kind_ = WeightKind::standard;
    w.alpha_ = alpha;
    w.name_ = "std:alpha=" + std::to_string(alpha);
    w.validate();
    return w;
}

Weight Weight::log_power(double alpha, double beta) {
    if (alpha < -1.0 || (alpha == -1.0 && beta >= -1.0))
        throw std::invalid_argument("log_power weight not integrable");
    Weight w;
    w.kind_ = WeightKind::log_power;
    w.alpha_ = alpha;
    w.beta_ = beta;
    w.name_ = "logpow:alpha=" + std::to_string(alpha) + ",beta=" + std::to_string(beta);
    w.validate();
    return w;
}

Weight Weight::exponential(double alpha, double beta) {
    if (alpha <= 0.0 || alpha > 1.0 || beta <= 0.0)
        throw std::invalid_argument("exponential weight needs 0 < alpha <= 1, beta > 0");
    Weight w;
    w.kind_ = WeightKind::exponential;
    w.alpha_ = alpha;
    w.beta_ = beta;
    w.name_ = "exp:alpha=" + std::to_string(alpha) + ",beta=" + std::to_string(beta);
    w.validate();
    return w;
}

Weight Weight::oscillating() {
    Weight w;
    w.kind_ = WeightKind::oscillating;
    w.name_ = "osc";
    w.validate();
    return w;
}

Weight Weight::custom_sampled(std::vector<std::pair<double, double>> nodes) {
    if (nodes.size() < 2) throw std::invalid_argument("custom_sampled needs >= 2 nodes");
    std::sort(nodes.begin(), nodes.end());
    for (auto& [r, v] : nodes) {
        if (r < 0.0 || r >= 1.0) throw std::invalid_argument("custom_sampled radius out of [0,1)");
        if (!(v > 0.0)) throw std::invalid_argument("custom_sampled density must be positive");
    }
    Weight w;
    w.kind_ = WeightKind::custom_sampled;
    w.nodes_ = std::move(nodes);
    const auto& a = w.nodes_[w.nodes_.size() - 2];
    const auto& b = w.nodes_.back();
    double oma = 1.0 - a.first, omb = 1.0 - b.first;
    w.tail_p_ = std::log(b.second / a.second) / std::log(omb / oma);
    if (w.tail_p_ <= -1.0 + 1e-9)
        throw std::invalid_argument("custom_sampled tail not integrable");
    w.tail_c_ = b.second / std::pow(omb, w.tail_p_);
    w.name_ = "file:" + std::to_string(w.nodes_.size()) + "-nodes";
    w.validate();
    return w;
}

Weight Weight::custom_density(std::string name, std::function<double(double)> f,
                              double tail_decay) {
    if (tail_decay <= -1.0) throw std::invalid_argument("custom_density tail not integrable");
    Weight w;
    w.kind_ = WeightKind::custom_density;
    w.fn_ = std::move(f);
    w.fn_decay_ = tail_decay;
    w.name_ = std::move(name);
    w.validate();
    return w;
}

void Weight::validate() {
    for (double r : {0.0, 0.25, 0.5, 0.9, 0.999, 1.0 - 1e-9}) {
        double v = density(r);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("weight density must be positive and finite on [0,1)");
    }
}

double Weight::density(double r) const { return density_om(1.0 - r); }

double Weight::density_om(double om) const {
    const double x = 1.0 - std::log(om);  // log(e/(1-r))
    switch (kind_) {
        case WeightKind::standard:
            return std::pow(om, alpha_);
        case WeightKind::log_power:
            return std::pow(om, alpha_) * std::pow(x, beta_);
        case WeightKind::exponential:
            return std::exp(-beta_ * std::pow(x, alpha_));
        case WeightKind::oscillating:
            return std::abs(std::sin(x - 1.0)) / (om * x * x) + 1.0;
        case WeightKind::custom_sampled: {
            const double r = 1.0 - om;
            if (r <= nodes_.front().first) return nodes_.front().second;
            if (r >= nodes_.back().first) return tail_c_ * std::pow(om, tail_p_);
            auto it = std::upper_bound(nodes_.begin(), nodes_.end(),
                                       std::make_pair(r, 0.0));
            auto lo = *(it - 1);
            auto hi = *it;
            double t = (r - lo.first) / (hi.first - lo.first);
            return std::exp((1.0 - t) * std::log(lo.second) + t * std::log(hi.second));
        }
        case WeightKind::custom_density:
            return fn_(1.0 - om);
    }
    return 0.0;
}

double Weight::gfun(double x) const {
    const double om = om_of_x(x);
    switch (kind_) {
        case WeightKind::standard:
            return std::exp((1.0 - x) * (alpha_ + 1.0));
        case WeightKind::log_power:
            return std::pow(x, beta_) * std::exp((1.0 - x) * (alpha_ + 1.0));
        case WeightKind::exponential:
            return std::exp(-beta_ * std::pow(x, alpha_) + 1.0 - x);
        case WeightKind::oscillating:
            return std::abs(std::sin(x - 1.0)) / (x * x) + om;
        default:
            return density_om(om) * om;
    }
}

double Weight::hat_tail(double X) const {
    switch (kind_) {
        case WeightKind::standard:
            return std::exp((1.0 - X) * (alpha_ + 1.0)) / (alpha_ + 1.0);
        case WeightKind::log_power:
            if (alpha_ == -1.0) return std::pow(X, beta_ + 1.0) / (-beta_ - 1.0);
            return std::pow(X, beta_) * std::exp((1.0 - X) * (alpha_ + 1.0)) / (alpha_ + 1.0) *
                   (1.0 + beta_ / ((alpha_ + 1.0) * X));
        case WeightKind::exponential:
            // decay rate 1 + alpha beta X^{alpha-1}; the cut makes this term tiny
            return std::exp(-beta_ * std::pow(X, alpha_) + 1.0 - X);
        case WeightKind::oscillating:
            // valid when X-1 is a multiple of pi
            return (2.0 / kPi) / X + 2.0 * kM2 / (X * X * X) + std::exp(1.0 - X);
        case WeightKind::custom_sampled:
            return tail_c_ * std::exp((1.0 - X) * (tail_p_ + 1.0)) / (tail_p_ + 1.0);
        case WeightKind::custom_density:
            return gfun(X) / (fn_decay_ + 1.0);
    }
    return 0.0;
}

double Weight::x_cut(double x0, double x_req) const {
    double base = std::max(x0, x_req);
    switch (kind_) {
        case WeightKind::oscillating: {
            double need = std::max({x0 + 30.0, x_req + 45.0, 600.0});
            return 1.0 + kPi * std::ceil((need - 1.0) / kPi);
        }
        case WeightKind::log_power:
            if (alpha_ == -1.0) return base + 45.0;
            [[fallthrough]];
        case WeightKind::standard:
            return base + 45.0 / std::min(alpha_ + 1.0, 1.0);
        case WeightKind::exponential:
            return base + 45.0;
        case WeightKind::custom_sampled:
            return std::max(base, 1.0 - std::log(1.0 - nodes_.back().first)) +
                   45.0 / std::min(tail_p_ + 1.0, 1.0);
        case WeightKind::custom_density:
            return base + 45.0 / std::min(fn_decay_ + 1.0, 1.0);
    }
    return base + 45.0;
}

std::vector<double> Weight::breaks(double x0, double x1) const {
    std::vector<double> pts;
    if (kind_ == WeightKind::oscillating) {
        double k = std::ceil((x0 - 1.0) / kPi);
        for (double t = 1.0 + k * kPi; t < x1; t += kPi) pts.push_back(t);
    } else if (kind_ == WeightKind::custom_sampled) {
        for (auto& [r, v] : nodes_) {
            double x = 1.0 - std::log(1.0 - r);
            if (x > x0 && x < x1) pts.push_back(x);
        }
    }
    return pts;
}

// ---------------------------------------------------------------------------
// WeightProfile

WeightProfile::WeightProfile(Weight w, ClassifyOptions opts)
    : w_(std::move(w)), opts_(opts) {
    if (!(omega_hat(0.0) > 0.0) || !std::isfinite(omega_hat(0.0)))
        throw std::invalid_argument("weight is not integrable");
    moments_.resize(opts_.moment_count);
    for (int n = 0; n < opts_.moment_count; ++n) {
        if (w_.kind() == WeightKind::standard) {
            // Beta(n+1, alpha+1)
            double a = w_.alpha();
            moments_[n] = std::exp(std::lgamma(n + 1.0) + std::lgamma(a + 1.0) -
                                   std::lgamma(n + a + 2.0));
        } else {
            const int nn = n;
            moments_[n] = integrate_tail(
                1.0,
                [nn](double x) {
                    return nn == 0 ? 1.0 : std::exp(nn * std::log1p(-std::exp(1.0 - x)));
                },
                1.0 + std::log(nn + 1.0));
        }
    }
    classify();
}

// Numeric integral int_{x0}^inf factor(x) gfun(x) dx where factor -> 1 beyond
// x_req's resolution scale; the analytic family tail closes the far end.
double WeightProfile::integrate_tail(double x0, const std::function<double(double)>& factor,
                                     double x_req) const {
    const double x1 = w_.x_cut(x0, x_req);
    auto f = [&](double x) { return factor(x) * w_.gfun(x); };
    QuadResult q = integrate_adaptive(f, x0, x1, 5e-13, 1e-300, w_.breaks(x0, x1));
    return q.value + w_.hat_tail(x1);
}

double WeightProfile::omega_hat(double r) const {
    if (r >= 1.0) return 0.0;
    if (r < 0.0) throw std::invalid_argument("omega_hat: r in [0,1] required");
    switch (w_.kind()) {
        case WeightKind::standard:
            return std::pow(1.0 - r, w_.alpha() + 1.0) / (w_.alpha() + 1.0);
        case WeightKind::log_power:
            if (w_.alpha() == -1.0) {
                double X = 1.0 - std::log(1.0 - r);
                return std::pow(X, w_.beta() + 1.0) / (-w_.beta() - 1.0);
            }
            break;
        default:
            break;
    }
    {
        std::lock_guard<std::mutex> lock(memo_mtx_);
        auto it = hat_memo_.find(r);
        if (it != hat_memo_.end()) return it->second;
    }
    double x0 = 1.0 - std::log(1.0 - r);
    double v = integrate_tail(x0, [](double) { return 1.0; }, 1.0);
    std::lock_guard<std::mutex> lock(memo_mtx_);
    hat_memo_[r] = v;
    return v;
}

double WeightProfile::omega_tilde(double r) const {
    if (r >= 1.0) return 0.0;
    if (w_.kind() == WeightKind::standard) {
        double a = w_.alpha(), om = 1.0 - r;
        return std::pow(om, a + 1.0) / (a + 1.0) - std::pow(om, a + 2.0) / (a + 2.0);
    }
    {
        std::lock_guard<std::mutex> lock(memo_mtx_);
        auto it = tilde_memo_.find(r);
        if (it != tilde_memo_.end()) return it->second;
    }
    double x0 = 1.0 - std::log(1.0 - r);
    double v = integrate_tail(x0, [](double x) { return s_of_x(x); }, 1.0);
    std::lock_guard<std::mutex> lock(memo_mtx_);
    tilde_memo_[r] = v;
    return v;
}

double WeightProfile::omega_star(double r) const {
    if (r >= 1.0) return 0.0;
    if (!(r > 0.0))
        throw std::invalid_argument("omega_star: r > 0 required (log singularity at 0)");
    {
        std::lock_guard<std::mutex> lock(memo_mtx_);
        auto it = star_memo_.find(r);
        if (it != star_memo_.end()) return it->second;
    }
    const double x0 = 1.0 - std::log(1.0 - r);
    const double logr = std::log(r);
    // factor s log(s/r); the far tail carries log(1/r) times the weight tail
    const double x1 = w_.x_cut(x0, 1.0);
    auto f = [&](double x) {
        double s = s_of_x(x);
        return s * (std::log(s) - logr) * w_.gfun(x);
    };
    QuadResult q = integrate_adaptive(f, x0, x1, 5e-13, 1e-300, w_.breaks(x0, x1));
    double v = q.value + (-logr) * w_.hat_tail(x1);
    std::lock_guard<std::mutex> lock(memo_mtx_);
    star_memo_[r] = v;
    return v;
}

double WeightProfile::moment(int n) const {
    if (n < 0) throw std::invalid_argument("moment: n >= 0 required");
    if (n < static_cast<int>(moments_.size())) return moments_[n];
    const int nn = n;
    return integrate_tail(
        1.0,
        [nn](double x) { return std::exp(nn * std::log1p(-std::exp(1.0 - x))); },
        1.0 + std::log(nn + 1.0));
}

double WeightProfile::box_mass_at(double a) const {
    if (a < 0.0 || a >= 1.0) throw std::invalid_argument("box_mass_at: |a| in [0,1) required");
    if (a == 0.0) return disk_mass();  // S(0) := D
    return (1.0 - a) * omega_tilde(a) / kPi;
}

void WeightProfile::classify() {
    const int J = opts_.j_max, S = opts_.subpoints;
    grid_.clear();
    grid_level_.clear();
    for (int j = 1; j <= J; ++j) {
        double lo = 1.0 - std::pow(2.0, -j);
        double step = std::pow(2.0, -j - 1) / S;
        for (int k = 0; k < S; ++k) {
            grid_.push_back(lo + k * step);
            grid_level_.push_back(j);
        }
    }

    std::vector<double> ratio(grid_.size()), star(grid_.size());
    for (size_t i = 0; i < grid_.size(); ++i) {
        double r = grid_[i];
        ratio[i] = omega_hat(r) / ((1.0 - r) * density(r));
        star[i] = omega_star(r);
    }

    reg_lo_ = *std::min_element(ratio.begin(), ratio.end());
    reg_hi_ = *std::max_element(ratio.begin(), ratio.end());

    dd_constant_ = 0.0;
    for (double r : grid_)
        dd_constant_ = std::max(dd_constant_, omega_hat(r) / omega_hat(0.5 * (1.0 + r)));

    // liminf/limsup estimates over the tail window
    double a = 1e300, b = 0.0;
    for (size_t i = 0; i < grid_.size(); ++i) {
        if (grid_level_[i] > J - opts_.tail_levels) {
            a = std::min(a, ratio[i]);
            b = std::max(b, ratio[i]);
        }
    }
    A_ = a;
    B_ = b;
    condition_ii_ = (2.0 * A_ + A_ * B_ - B_ > 0.0);

    // per-level medians of the regularity ratio
    std::vector<double> med(J + 1, 0.0);
    for (int j = 1; j <= J; ++j) {
        std::vector<double> vals;
        for (size_t i = 0; i < grid_.size(); ++i)
            if (grid_level_[i] == j) vals.push_back(ratio[i]);
        std::sort(vals.begin(), vals.end());
        med[j] = vals[vals.size() / 2];
    }
    double trend = med[J] / med[J / 2];
    bool monotone_tail = true;
    for (int j = J - 3; j < J; ++j)
        if (!(med[j + 1] > med[j])) monotone_tail = false;

    if (reg_hi_ / reg_lo_ < opts_.bounded_ratio && trend <= opts_.trend_threshold)
        cls_ = WeightClass::regular;
    else if (monotone_tail && trend > opts_.trend_threshold)
        cls_ = WeightClass::rapidly_increasing;
    else
        cls_ = WeightClass::inconclusive;

    // delta: first grid radius from which omega_* strictly decreases onward
    size_t d0 = grid_.size() - 1;
    for (size_t i = 0; i + 1 < grid_.size(); ++i) {
        bool dec = true;
        for (size_t k = i; k + 1 < grid_.size(); ++k)
            if (!(star[k + 1] < star[k])) { dec = false; break; }
        if (dec) { d0 = i; break; }
    }
    delta_ = grid_[d0];

    // exponent search on the grid beyond max(delta, 1/2)
    std::vector<size_t> idx;
    for (size_t i = 0; i < grid_.size(); ++i)
        if (grid_[i] >= std::max(delta_, 0.5)) idx.push_back(i);
    auto monotone = [&](double x, bool decreasing) {
        for (size_t k = 0; k + 1 < idx.size(); ++k) {
            double f0 = star[idx[k]] / std::pow(1.0 - grid_[idx[k]], x);
            double f1 = star[idx[k + 1]] / std::pow(1.0 - grid_[idx[k + 1]], x);
            if (decreasing ? (f1 > f0 * (1.0 + 1e-12)) : (f1 < f0 * (1.0 - 1e-12)))
                return false;
        }
        return true;
    };
    exponents_found_ = false;
    if (idx.size() >= 3 && monotone(1.0 + 1e-9, true)) {
        double lo = 1.0 + 1e-9, hi = 64.0;
        if (monotone(hi, true)) {
            a_exp_ = hi;
        } else {
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                (monotone(mid, true) ? lo : hi) = mid;
            }
            a_exp_ = lo;
        }
        // smallest exponent certifying the increasing claim
        double ilo = 1.0 + 1e-9, ihi = 64.0;
        if (monotone(ihi, false)) {
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (ilo + ihi);
                (monotone(mid, false) ? ihi : ilo) = mid;
            }
            b_exp_ = ihi;
            exponents_found_ = (1.0 < a_exp_ && a_exp_ < b_exp_);
        }
    }
}

WeightProfile::GapExponents WeightProfile::gap_exponents() const {
    GapExponents g;
    // smallest slack wins: the exponents track the tail limits as closely as
    // the window estimates allow
    for (double t : {1e-4, 1e-3, 0.005, 0.01, 0.025, 0.05}) {
        double eps = t * A_;
        double a = 1.0 / (B_ + eps) - 1.0;
        double b = 1.0 / (A_ - eps) - 1.0;
        if (2.0 * a + 2.0 - b > 0.0) {
            g.a = a;
            g.b = b;
            g.eps = eps;
            g.ok = true;
            return g;
        }
    }
    return g;
}

}  // namespace bergman

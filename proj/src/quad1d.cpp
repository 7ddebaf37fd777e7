#include "bergman/quad1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace bergman {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1 || order > 64) throw std::invalid_argument("gauss_legendre: order out of range");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int order) {
    const GaussRule& g = gauss_legendre(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (size_t i = 0; i < g.nodes.size(); ++i) sum += g.weights[i] * f(mid + half * g.nodes[i]);
    return sum * half;
}

namespace {

struct AdaptState {
    const std::function<double(double)>* f;
    double rel_tol, abs_tol, scale;
    long evals;
};

double adapt(AdaptState& st, double a, double b, double whole, int depth) {
    double mid = 0.5 * (a + b);
    double left = integrate_gl(*st.f, a, mid, 12);
    double right = integrate_gl(*st.f, mid, b, 12);
    st.evals += 24;
    double err = std::abs(left + right - whole);
    if (depth > 48 || err <= std::max(st.abs_tol, st.rel_tol * st.scale)) return left + right;
    return adapt(st, a, mid, left, depth + 1) + adapt(st, mid, b, right, depth + 1);
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double rel_tol, double abs_tol, const std::vector<double>& breaks) {
    QuadResult res;
    if (!(b > a)) return res;
    std::vector<double> pts;
    pts.push_back(a);
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    // First pass fixes the relative scale, second pass refines against it.
    double rough = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) rough += integrate_gl(f, pts[i], pts[i + 1], 12);

    AdaptState st{&f, rel_tol, abs_tol, std::max(std::abs(rough), abs_tol), 0};
    double total = 0.0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        double whole = integrate_gl(f, pts[i], pts[i + 1], 12);
        st.evals += 12;
        total += adapt(st, pts[i], pts[i + 1], whole, 0);
    }
    res.value = total;
    res.error = std::abs(total - rough);
    res.evals = st.evals;
    return res;
}

}  // namespace bergman

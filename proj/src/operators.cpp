#include "bergman/operators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "bergman/quad1d.hpp"
#include "bergman/svd.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bergman {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double t) {
    while (t > kPi) t -= 2.0 * kPi;
    while (t < -kPi) t += 2.0 * kPi;
    return t;
}

double now_ms() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

double ipow(double m, int k) {
    double v = 1.0;
    while (k > 0) {
        if (k & 1) v *= m;
        m *= m;
        k >>= 1;
    }
    return v;
}

// m^(-e/2); fast path when e is (close to) an integer.
struct PowKernel {
    int mode;    // 0: e even int, 1: e odd int, 2: general
    int half;    // floor(e/2) for integer modes
    double mexp; // -e/2 for the general mode

    explicit PowKernel(double e) {
        double r = std::round(e);
        if (std::abs(e - r) < 1e-9 && r >= 0.0 && r < 1e6) {
            int ei = static_cast<int>(r);
            mode = (ei % 2 == 0) ? 0 : 1;
            half = ei / 2;
            mexp = 0.0;
        } else {
            mode = 2;
            half = 0;
            mexp = -0.5 * e;
        }
    }
    double operator()(double m) const {
        switch (mode) {
            case 0: return 1.0 / ipow(m, half);
            case 1: return 1.0 / (ipow(m, half) * std::sqrt(m));
            default: return std::pow(m, mexp);
        }
    }
};

// Per-scenario node data for the a-grid scans: masses W_i = w_i dens |u|^q at
// the transported points F_i = phi(z_i).
struct ScanData {
    std::vector<double> W;
    std::vector<cplx> F;
    double total = 0.0;
};

ScanData precompute_scan(const OperatorSpec& spec, int levels) {
    auto quad = DiskQuadrature::get(levels);
    ScanData sd;
    sd.W.reserve(quad->node_count());
    sd.F.reserve(quad->node_count());
    for (const auto& ring : quad->rings()) {
        const double step = 2.0 * kPi / ring.n_ang;
        for (int t = 0; t < ring.n_ang; ++t) {
            cplx z = std::polar(ring.r, t * step);
            double w = ring.wr / ring.n_ang * spec.mu.density_at(z) *
                       std::pow(std::abs(spec.u(z)), spec.q);
            if (!std::isfinite(w)) throw NonFiniteError("non-finite scan weight");
            if (w != 0.0) {
                sd.W.push_back(w);
                sd.F.push_back(spec.phi.eval(z));
            }
        }
    }
    for (const Atom& at : spec.mu.atoms()) {
        double w = at.mass * std::pow(std::abs(spec.u(at.pos)), spec.q);
        if (w != 0.0) {
            sd.W.push_back(w);
            sd.F.push_back(spec.phi.eval(at.pos));
        }
    }
    for (double w : sd.W) sd.total += w;
    return sd;
}

// sum_i W_i |1 - conj(a) F_i|^{-e}  (e = exponent on the modulus)
double scan_sum(const ScanData& sd, cplx a, const PowKernel& pk) {
    const double ar = a.real(), ai = a.imag();
    double acc = 0.0;
    const size_t n = sd.W.size();
    for (size_t i = 0; i < n; ++i) {
        const cplx f = sd.F[i];
        const double re = 1.0 - (ar * f.real() + ai * f.imag());
        const double im = ar * f.imag() - ai * f.real();
        acc += sd.W[i] * pk(re * re + im * im);
    }
    return acc;
}

// Detect divergence: three successive levels each growing by >= 2x.
bool divergent_levels(const std::vector<double>& lv) {
    int run = 0;
    for (size_t i = 0; i + 1 < lv.size(); ++i) {
        if (lv[i] > 0.0 && lv[i + 1] >= 2.0 * lv[i]) {
            if (++run >= 3) return true;
        } else {
            run = 0;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Box accumulation over the a-grid (per-atom membership, inclusive bounds).

struct BoxTable {
    const AGrid* grid;
    std::vector<double> radii;                 // per level
    std::vector<std::vector<double>> mass;     // [level][angle]
    double center_mass = 0.0;                  // a = 0 box (whole disk)

    explicit BoxTable(const AGrid& g) : grid(&g) {
        for (int j = g.j_min; j <= g.j_max; ++j) {
            radii.push_back(1.0 - std::pow(2.0, -j));
            mass.emplace_back(g.n_ang(j), 0.0);
        }
    }
    void add(cplx pos, double m) {
        center_mass += m;
        const double pm = std::abs(pos), pa = std::arg(pos);
        for (size_t l = 0; l < radii.size(); ++l) {
            const double t = radii[l];
            if (pm < t) continue;
            const double half = 0.5 * (1.0 - t);
            const int n = static_cast<int>(mass[l].size());
            const double step = 2.0 * kPi / n;
            int t0 = static_cast<int>(std::ceil((pa - half) / step));
            int t1 = static_cast<int>(std::floor((pa + half) / step));
            for (int k = t0; k <= t1; ++k) {
                int idx = ((k % n) + n) % n;
                mass[l][idx] += m;
            }
        }
    }
};

struct OuterNodes {
    std::shared_ptr<const DiskQuadrature> quad;
    std::vector<long> ring_offset;  // global index of each ring's first node
    long count = 0;

    explicit OuterNodes(int levels, int gauss = 6) {
        quad = DiskQuadrature::get(levels, gauss);
        for (const auto& ring : quad->rings()) {
            ring_offset.push_back(count);
            count += ring.n_ang;
        }
    }
};

}  // namespace

const char* to_string(FuncFlag f) {
    switch (f) {
        case FuncFlag::ok: return "ok";
        case FuncFlag::divergent: return "divergent";
        case FuncFlag::hypothesis_failed: return "hypothesis_failed";
        case FuncFlag::truncation_warning: return "truncation_warning";
        case FuncFlag::tail_not_controlled: return "tail_not_controlled";
        case FuncFlag::exponent_gap_violated: return "exponent_gap_violated";
    }
    return "unknown";
}

OperatorSpec OperatorSpec::make(std::shared_ptr<const WeightProfile> profile, AnalyticMap u,
                                AnalyticMap phi, Measure mu, double p, double q, double gamma) {
    if (!(p > 0.0) || !(q > 0.0)) throw std::invalid_argument("exponents must be positive");
    if (!phi.self_map()) throw std::invalid_argument("phi must be a self-map of the disk");
    OperatorSpec spec;
    spec.profile = std::move(profile);
    AnalyticMap uc = u;
    spec.u = [uc](cplx z) { return uc.eval(z); };
    spec.u_map = std::move(u);
    spec.phi = std::move(phi);
    spec.mu = std::move(mu);
    spec.p = p;
    spec.q = q;
    spec.gamma = gamma;
    return spec;
}

bool OperatorSpec::radially_covariant() const {
    if (!mu.radial() || !mu.atoms().empty()) return false;
    if (!u_map || !u_map->is_monomial()) return false;
    return phi.is_monomial();
}

Pushforward OperatorSpec::nu() const {
    Pushforward pf;
    pf.u = u;
    pf.phi = phi;
    pf.base = mu;
    pf.q = q;
    int pw = 0;
    cplx c;
    if (u_map && u_map->is_monomial(&pw, &c) && pw == 0 && phi.is_monomial(&pw, &c) &&
        pw == 1 && std::abs(c - 1.0) == 0.0) {
        int upw = 0;
        cplx uc;
        u_map->is_monomial(&upw, &uc);
        pf.transport_closed = true;
        pf.transport_scale = std::pow(std::abs(uc), q);
    }
    return pf;
}

Pushforward OperatorSpec::sigma() const {
    Pushforward pf;
    pf.u = u;
    pf.phi = phi;
    pf.base = Measure::warea(profile);
    pf.q = 2.0;
    return pf;
}

int AGrid::n_ang(int j) const {
    return static_cast<int>(std::min<long>(64L << j, angular_cap));
}

std::string AGrid::describe() const {
    return "dyadic a-grid j=" + std::to_string(j_min) + ".." + std::to_string(j_max) +
           ", angular cap " + std::to_string(angular_cap);
}

// ---------------------------------------------------------------------------
// Carleson constant

FunctionalReport carleson_constant(const Measure& mu, const WeightProfile& prof, double p,
                                   double q, const AGrid& grid) {
    if (!(p <= q)) throw std::invalid_argument("carleson_constant needs p <= q");
    const double t0 = now_ms();
    FunctionalReport rep;
    rep.grid_desc = grid.describe();
    const double qp = q / p;

    const double total = mu.total_mass();
    rep.value = total / std::pow(prof.disk_mass(), qp);
    rep.witness = 0.0;
    rep.levels.push_back(rep.value);

    std::unique_ptr<BoxTable> table;
    if (!mu.closed_box_mass()) {
        table = std::make_unique<BoxTable>(grid);
        auto quad = DiskQuadrature::get(10);
        for (const auto& ring : quad->rings()) {
            const double step = 2.0 * kPi / ring.n_ang;
            for (int t = 0; t < ring.n_ang; ++t) {
                cplx z = std::polar(ring.r, t * step);
                table->add(z, ring.wr / ring.n_ang * mu.density_at(z));
            }
        }
        for (const Atom& at : mu.atoms()) table->add(at.pos, at.mass);
    }

    for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double t = 1.0 - std::pow(2.0, -j);
        const double wbox = std::pow(prof.box_mass_at(t), qp);
        const int n = grid.n_ang(j);
        double level = 0.0;
        cplx level_witness = t;
        if (mu.closed_box_mass() && mu.atoms().empty() && mu.radial()) {
            level = mu.box_mass(cplx(t, 0.0)) / wbox;
        } else if (mu.closed_box_mass()) {
            for (int i = 0; i < n; ++i) {
                cplx a = std::polar(t, 2.0 * kPi * i / n);
                double v = mu.box_mass(a) / wbox;
                if (v > level) {
                    level = v;
                    level_witness = a;
                }
            }
        } else {
            const auto& row = table->mass[j - grid.j_min];
            for (int i = 0; i < n; ++i) {
                double v = row[i] / wbox;
                if (v > level) {
                    level = v;
                    level_witness = std::polar(t, 2.0 * kPi * i / n);
                }
            }
        }
        rep.levels.push_back(level);
        if (level > rep.value) {
            rep.value = level;
            rep.witness = level_witness;
        }
    }
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem 1 / Theorem 2 grid scans

namespace {

struct LevelScan {
    std::vector<double> level_max;
    std::vector<cplx> level_witness;
};

LevelScan scan_levels(const OperatorSpec& spec, const ScanData& sd, const AGrid& grid,
                      double exponent, double box_power) {
    const PowKernel pk(exponent);
    const bool radial = spec.radially_covariant();
    LevelScan out;
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
        const double t = 1.0 - std::pow(2.0, -j);
        const double pref = std::pow(1.0 - t * t, exponent) /
                            std::pow(spec.profile->box_mass_at(t), box_power);
        const int n = radial ? 1 : grid.n_ang(j);
        std::vector<double> vals(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int i = 0; i < n; ++i) {
            cplx a = std::polar(t, 2.0 * kPi * i / n);
            vals[i] = pref * scan_sum(sd, a, pk);
        }
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (vals[i] > vals[best]) best = i;
        out.level_max.push_back(vals[best]);
        out.level_witness.push_back(std::polar(t, 2.0 * kPi * best / n));
    }
    return out;
}

}  // namespace

FunctionalReport boundedness_functional(const OperatorSpec& spec, const AGrid& grid,
                                        int levels) {
    if (!(spec.p <= spec.q)) throw std::invalid_argument("boundedness needs p <= q");
    const double t0 = now_ms();
    ScanData sd = precompute_scan(spec, levels);
    const double exponent = spec.q * (spec.gamma_eff() + 1.0) / spec.p;
    LevelScan scan = scan_levels(spec, sd, grid, exponent, spec.q / spec.p);

    FunctionalReport rep;
    rep.grid_desc = grid.describe() + ", quadrature J=" + std::to_string(levels);
    // a = 0: F_0 is the constant omega(D)^{-1/p}
    rep.value = sd.total / std::pow(spec.profile->disk_mass(), spec.q / spec.p);
    rep.witness = 0.0;
    rep.levels.push_back(rep.value);
    for (size_t l = 0; l < scan.level_max.size(); ++l) {
        rep.levels.push_back(scan.level_max[l]);
        if (scan.level_max[l] > rep.value) {
            rep.value = scan.level_max[l];
            rep.witness = scan.level_witness[l];
        }
    }
    if (divergent_levels(rep.levels)) rep.flag = FuncFlag::divergent;
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

FunctionalReport essential_norm_functional(const OperatorSpec& spec, const AGrid& tail_grid,
                                           int levels) {
    if (!(1.0 <= spec.p && spec.p <= spec.q))
        throw std::invalid_argument("essential norm needs 1 <= p <= q");
    const double t0 = now_ms();
    ScanData sd = precompute_scan(spec, levels);
    const double exponent = spec.q * (spec.gamma_eff() + 1.0) / spec.p;
    LevelScan scan = scan_levels(spec, sd, tail_grid, exponent, spec.q / spec.p);

    FunctionalReport rep;
    rep.grid_desc = tail_grid.describe() + ", quadrature J=" + std::to_string(levels);
    rep.levels = scan.level_max;
    const size_t window = std::min<size_t>(3, scan.level_max.size());
    for (size_t l = scan.level_max.size() - window; l < scan.level_max.size(); ++l) {
        if (scan.level_max[l] >= rep.value) {
            rep.value = scan.level_max[l];
            rep.witness = scan.level_witness[l];
        }
    }
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

RestrictedReport restricted_constant(const OperatorSpec& spec, double r, const AGrid& grid,
                                     int levels) {
    if (!(r > 0.5 && r < 1.0)) throw std::invalid_argument("restricted_constant needs 1/2 < r < 1");
    RestrictedReport out;

    // N_r^*: sup over grid radii beyond r
    AGrid tail = grid;
    tail.j_min = std::max(grid.j_min,
                          static_cast<int>(std::floor(std::log2(1.0 / (1.0 - r)))) + 1);
    if (tail.j_min <= tail.j_max) {
        ScanData sd = precompute_scan(spec, levels);
        const double exponent = spec.q * (spec.gamma_eff() + 1.0) / spec.p;
        LevelScan scan = scan_levels(spec, sd, tail, exponent, spec.q / spec.p);
        for (double v : scan.level_max) out.n_star = std::max(out.n_star, v);
    }

    // sup_a nu_r(S(a)) / omega(S(a))^{q/p}
    auto quad = DiskQuadrature::get(levels);
    std::vector<Atom> atoms = atomize(spec.nu(), *quad);
    BoxTable table(grid);
    double total = 0.0;
    for (const Atom& at : atoms) {
        if (std::abs(at.pos) >= r) {
            table.add(at.pos, at.mass);
            total += at.mass;
        }
    }
    const double qp = spec.q / spec.p;
    out.restricted_sup = total / std::pow(spec.profile->disk_mass(), qp);
    for (size_t l = 0; l < table.radii.size(); ++l) {
        const double wbox = std::pow(spec.profile->box_mass_at(table.radii[l]), qp);
        for (double m : table.mass[l]) out.restricted_sup = std::max(out.restricted_sup, m / wbox);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Theorem 3 / Remark 2 (q < p)

double psi_functional(const OperatorSpec& spec, cplx a, int levels, bool exponent_switch) {
    ScanData sd = precompute_scan(spec, levels);
    const double g1 = spec.gamma_eff() + 1.0;
    const double exponent = exponent_switch ? spec.q * g1 / spec.p : g1;
    const double box_power = exponent_switch ? spec.q / spec.p : 1.0;
    const PowKernel pk(exponent);
    const double am = std::abs(a);
    return std::pow(1.0 - am * am, exponent) * scan_sum(sd, a, pk) /
           std::pow(spec.profile->box_mass_at(am), box_power);
}

FunctionalReport psi_mixed_norm(const OperatorSpec& spec, int outer_levels, int inner_levels,
                                bool exponent_switch) {
    if (!(spec.q < spec.p)) throw std::invalid_argument("psi mixed norm needs q < p");
    const double t0 = now_ms();
    ScanData sd = precompute_scan(spec, inner_levels);
    const double g1 = spec.gamma_eff() + 1.0;
    const double exponent = exponent_switch ? spec.q * g1 / spec.p : g1;
    const double box_power = exponent_switch ? spec.q / spec.p : 1.0;
    const PowKernel pk(exponent);
    const double s = spec.p / (spec.p - spec.q);

    auto outer = DiskQuadrature::get(outer_levels, 6);
    // per-ring prefactors
    std::vector<double> pref;
    for (const auto& ring : outer->rings())
        pref.push_back(std::pow(1.0 - ring.r * ring.r, exponent) /
                       std::pow(spec.profile->box_mass_at(ring.r), box_power));

    std::vector<double> cell_sum(outer_levels + 1, 0.0);
    size_t ri = 0;
    for (const auto& ring : outer->rings()) {
        const double step = 2.0 * kPi / ring.n_ang;
        const double wdens = spec.profile->density(ring.r);
        std::vector<double> vals(ring.n_ang);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int t = 0; t < ring.n_ang; ++t) {
            cplx a = std::polar(ring.r, t * step);
            vals[t] = std::pow(pref[ri] * scan_sum(sd, a, pk), s);
        }
        double acc = 0.0;
        for (double v : vals) acc += v;
        cell_sum[ring.cell] += ring.wr / ring.n_ang * acc * wdens;
        ++ri;
    }

    FunctionalReport rep;
    rep.grid_desc = "outer J=" + std::to_string(outer_levels) + ", inner J=" +
                    std::to_string(inner_levels);
    double run = 0.0;
    for (double cs : cell_sum) {
        run += cs;
        rep.levels.push_back(std::pow(run, 1.0 / s));
    }
    rep.value = rep.levels.back();
    if (divergent_levels(rep.levels)) rep.flag = FuncFlag::divergent;
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

Remark2Report remark2_functionals(const OperatorSpec& spec, const AGrid& box_grid,
                                  int outer_levels, int inner_levels) {
    if (!(spec.q < spec.p)) throw std::invalid_argument("remark2 functionals need q < p");
    const double t0 = now_ms();
    const double s = spec.p / (spec.p - spec.q);

    auto inner = DiskQuadrature::get(inner_levels);
    Pushforward nu = spec.nu();
    std::vector<Atom> atoms = atomize(nu, *inner);

    // nu(S(a)) over the box grid: closed masses when the transport is trivial
    BoxTable table(box_grid);
    const double disk = spec.profile->disk_mass();
    double ratio0 = 0.0;
    std::vector<std::vector<double>> ratio(table.mass.size());
    if (nu.transport_closed && nu.base.closed_box_mass()) {
        ratio0 = nu.transport_scale * nu.base.total_mass() / disk;
        for (size_t l = 0; l < table.radii.size(); ++l) {
            const double t = table.radii[l];
            const double wbox = spec.profile->box_mass_at(t);
            const int n = static_cast<int>(table.mass[l].size());
            ratio[l].resize(n);
            for (int i = 0; i < n; ++i) {
                cplx a = std::polar(t, 2.0 * kPi * i / n);
                ratio[l][i] = nu.transport_scale * nu.base.box_mass(a) / wbox;
            }
        }
    } else {
        for (const Atom& at : atoms) table.add(at.pos, at.mass);
        ratio0 = table.center_mass / disk;
        for (size_t l = 0; l < table.mass.size(); ++l) {
            const double wbox = spec.profile->box_mass_at(table.radii[l]);
            ratio[l].resize(table.mass[l].size());
            for (size_t i = 0; i < table.mass[l].size(); ++i)
                ratio[l][i] = table.mass[l][i] / wbox;
        }
    }

    OuterNodes outer(outer_levels);

    // M_omega(nu)(z): sup over grid boxes containing z (a = 0 included)
    std::vector<double> m_val(outer.count, 0.0);
    {
        long idx = 0;
        for (const auto& ring : outer.quad->rings()) {
            const double step = 2.0 * kPi / ring.n_ang;
            for (int t = 0; t < ring.n_ang; ++t, ++idx) {
                const double theta = t * step;
                double best = ratio0;
                for (size_t l = 0; l < table.radii.size(); ++l) {
                    if (ring.r < table.radii[l]) break;
                    const double half = 0.5 * (1.0 - table.radii[l]);
                    const int n = static_cast<int>(ratio[l].size());
                    const double astep = 2.0 * kPi / n;
                    int k0 = static_cast<int>(std::ceil((theta - half) / astep));
                    int k1 = static_cast<int>(std::floor((theta + half) / astep));
                    for (int k = k0; k <= k1; ++k)
                        best = std::max(best, ratio[l][((k % n) + n) % n]);
                }
                m_val[idx] = best;
            }
        }
    }

    // Q(z) = sum over atoms xi in Gamma(z) of mass/omega-box(xi)
    std::vector<double> q_val(outer.count, 0.0);
    for (const Atom& at : atoms) {
        const double xm = std::abs(at.pos);
        if (xm == 0.0) {  // 0 lies in every Gamma(z)
            const double c = at.mass / disk;
            for (long i = 0; i < outer.count; ++i) q_val[i] += c;
            continue;
        }
        const double contrib = at.mass / spec.profile->box_mass_at(xm);
        const double xa = std::arg(at.pos);
        size_t r_idx = 0;
        for (const auto& ring : outer.quad->rings()) {
            const long off = outer.ring_offset[r_idx++];
            if (ring.r <= xm) continue;
            const double half = 0.5 * (1.0 - xm / ring.r);
            const int n = ring.n_ang;
            const double astep = 2.0 * kPi / n;
            int k0 = static_cast<int>(std::ceil((xa - half) / astep));
            int k1 = static_cast<int>(std::floor((xa + half) / astep));
            for (int k = k0; k <= k1; ++k) q_val[off + ((k % n) + n) % n] += contrib;
        }
    }

    auto mixed_norm = [&](const std::vector<double>& fv) {
        std::vector<double> cell_sum(outer_levels + 1, 0.0);
        long idx = 0;
        for (const auto& ring : outer.quad->rings()) {
            const double wdens = spec.profile->density(ring.r);
            double acc = 0.0;
            for (int t = 0; t < ring.n_ang; ++t, ++idx) acc += std::pow(fv[idx], s);
            cell_sum[ring.cell] += ring.wr / ring.n_ang * acc * wdens;
        }
        FunctionalReport rep;
        rep.grid_desc = "outer J=" + std::to_string(outer_levels) + ", inner J=" +
                        std::to_string(inner_levels) + ", " + box_grid.describe();
        double run = 0.0;
        for (double cs : cell_sum) {
            run += cs;
            rep.levels.push_back(std::pow(run, 1.0 / s));
        }
        rep.value = rep.levels.back();
        if (divergent_levels(rep.levels)) rep.flag = FuncFlag::divergent;
        return rep;
    };

    Remark2Report out;
    out.m_norm = mixed_norm(m_val);
    out.q_norm = mixed_norm(q_val);
    out.m_norm.wall_time_ms = out.q_norm.wall_time_ms = now_ms() - t0;
    return out;
}

FunctionalReport phi_r_functional(const OperatorSpec& spec, double r, int outer_levels,
                                  int inner_levels) {
    if (!(spec.q < spec.p)) throw std::invalid_argument("phi_r functional needs q < p");
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("phi_r needs 0 < r < 1");
    const double t0 = now_ms();
    const double s = spec.p / (spec.p - spec.q);

    auto inner = DiskQuadrature::get(inner_levels);
    std::vector<Atom> atoms = atomize(spec.nu(), *inner);

    // nu(Delta(xi, r)) on the xi-grid via Euclidean ring windows
    OuterNodes xi_nodes(outer_levels);
    std::vector<double> nu_delta(xi_nodes.count, 0.0);
    for (const Atom& at : atoms) {
        EuclideanDisk d = pseudo_disk_shape(at.pos, r);
        const double cm = std::abs(d.center), ca = std::arg(d.center);
        size_t ri = 0;
        for (const auto& ring : xi_nodes.quad->rings()) {
            const long off = xi_nodes.ring_offset[ri++];
            if (ring.r <= cm - d.radius || ring.r >= cm + d.radius) continue;
            const int n = ring.n_ang;
            if (ring.r < d.radius - cm) {
                for (int t = 0; t < n; ++t) nu_delta[off + t] += at.mass;
                continue;
            }
            double cosw = (ring.r * ring.r + cm * cm - d.radius * d.radius) /
                          (2.0 * ring.r * cm);
            if (cosw >= 1.0) continue;
            const double w = std::acos(std::max(-1.0, cosw));
            const double astep = 2.0 * kPi / n;
            int k0 = static_cast<int>(std::ceil((ca - w) / astep));
            int k1 = static_cast<int>(std::floor((ca + w) / astep));
            for (int k = k0; k <= k1; ++k) nu_delta[off + ((k % n) + n) % n] += at.mass;
        }
    }

    // Phi_r(z) = sum over xi-nodes in Gamma(z), via the tent decomposition
    std::vector<double> phi_val(xi_nodes.count, 0.0);
    {
        long idx = 0;
        size_t ri = 0;
        for (const auto& ring_xi : xi_nodes.quad->rings()) {
            const double step = 2.0 * kPi / ring_xi.n_ang;
            const double boxm = spec.profile->box_mass_at(ring_xi.r);
            const double geom =
                1.0 / (boxm * (1.0 - ring_xi.r) * (1.0 - ring_xi.r));
            for (int t = 0; t < ring_xi.n_ang; ++t, ++idx) {
                const double contrib =
                    ring_xi.wr / ring_xi.n_ang * nu_delta[idx] * geom;
                if (contrib == 0.0) continue;
                const double xa = t * step;
                size_t rj = 0;
                for (const auto& ring_z : xi_nodes.quad->rings()) {
                    const long off = xi_nodes.ring_offset[rj++];
                    if (ring_z.r <= ring_xi.r) continue;
                    const double half = 0.5 * (1.0 - ring_xi.r / ring_z.r);
                    const int n = ring_z.n_ang;
                    const double astep = 2.0 * kPi / n;
                    int k0 = static_cast<int>(std::ceil((xa - half) / astep));
                    int k1 = static_cast<int>(std::floor((xa + half) / astep));
                    for (int k = k0; k <= k1; ++k)
                        phi_val[off + ((k % n) + n) % n] += contrib;
                }
            }
            ++ri;
        }
    }

    std::vector<double> cell_sum(outer_levels + 1, 0.0);
    long idx = 0;
    for (const auto& ring : xi_nodes.quad->rings()) {
        const double wdens = spec.profile->density(ring.r);
        double acc = 0.0;
        for (int t = 0; t < ring.n_ang; ++t, ++idx) acc += std::pow(phi_val[idx], s);
        cell_sum[ring.cell] += ring.wr / ring.n_ang * acc * wdens;
    }
    FunctionalReport rep;
    rep.grid_desc = "experimental Phi_r, outer J=" + std::to_string(outer_levels);
    double run = 0.0;
    for (double cs : cell_sum) {
        run += cs;
        rep.levels.push_back(std::pow(run, 1.0 / s));
    }
    rep.value = rep.levels.back();
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

// ---------------------------------------------------------------------------
// Theorem 4

LogSqIntegral log_sq_integral(const WeightProfile& prof) {
    const Weight& w = prof.weight();
    auto eval = [&](double x_req) {
        const double x1 = w.x_cut(1.0, x_req);
        auto f = [&](double x) { return x * x * w.gfun(x); };
        QuadResult q = integrate_adaptive(f, 1.0, x1, 1e-11, 1e-300, w.breaks(1.0, x1));
        return q.value + x1 * x1 * w.hat_tail(x1);
    };
    LogSqIntegral out;
    const double i1 = eval(1.0);
    const double i2 = eval(w.x_cut(1.0, 1.0) + 300.0);
    out.value = i2;
    out.converged = std::abs(i2 - i1) <= 1e-6 * std::max(std::abs(i2), 1.0);
    return out;
}

FunctionalReport schatten_functional(const OperatorSpec& spec, double p_schatten, double r,
                                     int outer_levels, int inner_levels) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("schatten needs 0 < r < 1");
    if (!(p_schatten > 0.0)) throw std::invalid_argument("schatten needs p > 0");
    const double t0 = now_ms();
    FunctionalReport rep;
    rep.grid_desc = "outer J=" + std::to_string(outer_levels) + ", inner J=" +
                    std::to_string(inner_levels) + ", r=" + std::to_string(r);

    LogSqIntegral hyp = log_sq_integral(*spec.profile);
    if (!hyp.converged) {
        rep.flag = FuncFlag::hypothesis_failed;
        rep.wall_time_ms = now_ms() - t0;
        return rep;
    }

    auto inner = DiskQuadrature::get(inner_levels);
    std::vector<Atom> atoms = atomize(spec.sigma(), *inner);

    OuterNodes outer(outer_levels);
    std::vector<double> sigma_mass(outer.count, 0.0);
    for (const Atom& at : atoms) {
        EuclideanDisk d = pseudo_disk_shape(at.pos, r);
        const double cm = std::abs(d.center), ca = std::arg(d.center);
        size_t ri = 0;
        for (const auto& ring : outer.quad->rings()) {
            const long off = outer.ring_offset[ri++];
            if (ring.r <= cm - d.radius || ring.r >= cm + d.radius) continue;
            const int n = ring.n_ang;
            if (ring.r < d.radius - cm) {
                for (int t = 0; t < n; ++t) sigma_mass[off + t] += at.mass;
                continue;
            }
            double cosw = (ring.r * ring.r + cm * cm - d.radius * d.radius) /
                          (2.0 * ring.r * cm);
            if (cosw >= 1.0) continue;
            const double w = std::acos(std::max(-1.0, cosw));
            const double astep = 2.0 * kPi / n;
            int k0 = static_cast<int>(std::ceil((ca - w) / astep));
            int k1 = static_cast<int>(std::floor((ca + w) / astep));
            for (int k = k0; k <= k1; ++k) sigma_mass[off + ((k % n) + n) % n] += at.mass;
        }
    }

    std::vector<double> cell_sum(outer_levels + 1, 0.0);
    long idx = 0;
    for (const auto& ring : outer.quad->rings()) {
        const double wstar = spec.profile->omega_star(ring.r);
        const double geom = 1.0 / ((1.0 - ring.r * ring.r) * (1.0 - ring.r * ring.r));
        double acc = 0.0;
        for (int t = 0; t < ring.n_ang; ++t, ++idx) {
            if (sigma_mass[idx] > 0.0)
                acc += std::pow(sigma_mass[idx] / wstar, 0.5 * p_schatten);
        }
        cell_sum[ring.cell] += ring.wr / ring.n_ang * acc * geom;
    }
    double run = 0.0;
    for (double cs : cell_sum) {
        run += cs;
        rep.levels.push_back(run);
    }
    rep.value = rep.levels.back();
    if (divergent_levels(rep.levels)) rep.flag = FuncFlag::divergent;
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

// ---------------------------------------------------------------------------
// Matrix oracle / Toeplitz

double MatrixOracle::schatten_norm(double p) const {
    double acc = 0.0;
    for (double s : sv) acc += std::pow(s, p);
    return std::pow(acc, 1.0 / p);
}

double MatrixOracle::hs_norm_sq() const {
    double acc = 0.0;
    for (double s : sv) acc += s * s;
    return acc;
}

MatrixOracle matrix_oracle(const AnalyticMap& u, const AnalyticMap& phi,
                           const WeightProfile& prof, int N, int max_rows) {
    if (!u.is_polynomial() || !phi.is_polynomial())
        throw std::invalid_argument("matrix oracle needs polynomial u and phi");
    const std::vector<cplx> uc = u.taylor_coefficients();
    const std::vector<cplx> pc = phi.taylor_coefficients();
    const int du = static_cast<int>(uc.size()) - 1;
    const int dp = static_cast<int>(pc.size()) - 1;

    MatrixOracle M;
    M.cols = N + 1;
    long closure = static_cast<long>(du) + static_cast<long>(N) * dp + 1;
    M.rows = static_cast<int>(std::min<long>(closure, max_rows));
    M.truncation_warning = closure > max_rows;
    M.entries.assign(static_cast<size_t>(M.rows) * M.cols, 0.0);

    std::vector<double> root2m(std::max(M.rows, M.cols));
    for (int j = 0; j < static_cast<int>(root2m.size()); ++j)
        root2m[j] = std::sqrt(2.0 * prof.moment(2 * j + 1));

    std::vector<cplx> cur = uc;  // coefficients of u * phi^k
    for (int k = 0; k <= N; ++k) {
        for (int j = 0; j < M.rows && j < static_cast<int>(cur.size()); ++j)
            M.entries[static_cast<size_t>(j) * M.cols + k] = cur[j] * root2m[j] / root2m[k];
        if (k < N) {
            std::vector<cplx> next(cur.size() + dp, 0.0);
            for (size_t i = 0; i < cur.size(); ++i)
                for (size_t l = 0; l < pc.size(); ++l) next[i + l] += cur[i] * pc[l];
            cur = std::move(next);
        }
    }
    M.sv = singular_values_jacobi(M.entries, M.rows, M.cols);
    return M;
}

std::vector<cplx> toeplitz_matrix(const AnalyticMap& u, const AnalyticMap& phi,
                                  const WeightProfile& prof, int N, int levels,
                                  int gauss_order) {
    if (!u.is_polynomial() || !phi.is_polynomial())
        throw std::invalid_argument("toeplitz matrix needs polynomial u and phi");
    const int du = u.degree(), dp = phi.degree();
    const int min_ang = 2 * (N * std::max(dp, 1) + du) + 8;
    auto quad = DiskQuadrature::get(levels, gauss_order, min_ang);

    std::vector<double> root2m(N + 1);
    for (int j = 0; j <= N; ++j) root2m[j] = std::sqrt(2.0 * prof.moment(2 * j + 1));

    // fixed-size node chunks accumulated in order: bit-stable results
    struct Node {
        cplx phi_z;
        double h;
    };
    std::vector<Node> nodes;
    nodes.reserve(quad->node_count());
    for (const auto& ring : quad->rings()) {
        const double step = 2.0 * kPi / ring.n_ang;
        const double wd = prof.density(ring.r) * ring.wr / ring.n_ang;
        for (int t = 0; t < ring.n_ang; ++t) {
            cplx z = std::polar(ring.r, t * step);
            nodes.push_back({phi.eval(z), std::norm(u.eval(z)) * wd});
        }
    }

    const size_t chunk = 8192;
    const size_t n_chunks = (nodes.size() + chunk - 1) / chunk;
    const size_t dim = static_cast<size_t>(N + 1) * (N + 1);
    std::vector<std::vector<cplx>> partial(n_chunks);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (long c = 0; c < static_cast<long>(n_chunks); ++c) {
        std::vector<cplx> acc(dim, 0.0);
        const size_t lo = c * chunk, hi = std::min(nodes.size(), lo + chunk);
        for (size_t i = lo; i < hi; ++i) {
            const cplx f = nodes[i].phi_z;
            const double h = nodes[i].h;
            if (h == 0.0) continue;
            cplx pj = 1.0;  // phi^j
            for (int j = 0; j <= N; ++j) {
                const cplx cpj = std::conj(pj) * h;
                cplx pk = pj;  // phi^k progression, k >= j
                for (int k = j; k <= N; ++k) {
                    acc[static_cast<size_t>(j) * (N + 1) + k] += cpj * pk;
                    pk *= f;
                }
                pj *= f;
            }
        }
        partial[c] = std::move(acc);
    }

    std::vector<cplx> T(dim, 0.0);
    for (size_t c = 0; c < n_chunks; ++c)
        for (size_t i = 0; i < dim; ++i) T[i] += partial[c][i];
    for (int j = 0; j <= N; ++j)
        for (int k = j; k <= N; ++k) {
            cplx v = T[static_cast<size_t>(j) * (N + 1) + k] / (root2m[j] * root2m[k]);
            T[static_cast<size_t>(j) * (N + 1) + k] = v;
            T[static_cast<size_t>(k) * (N + 1) + j] = std::conj(v);
        }
    return T;
}

// ---------------------------------------------------------------------------
// Theorem 5 / Theorem 6 / Corollary 7

MultiplierBoundReport multiplier_bound_profile(const std::function<cplx(cplx)>& u,
                                               const AnalyticMap& phi,
                                               const WeightProfile& prof, double p,
                                               const AGrid& z_grid) {
    if (!(p > 1.0)) throw std::invalid_argument("multiplier bound needs p > 1");
    if (phi.kind() != AnalyticMap::Kind::blaschke)
        throw std::invalid_argument("multiplier bound profile needs a blaschke symbol");
    MultiplierBoundReport out;
    const BlaschkeData bd = phi.blaschke_data();
    out.blaschke_constant = blaschke_bound(bd);
    out.implied_constant = std::max(
        out.blaschke_constant,
        std::pow(out.blaschke_constant, prof.exponents_found() ? prof.b_exp() : 1.0));
    const double shape_pow = p / (p - 1.0) - 1.0;  // p' - 1

    for (int j = z_grid.j_min; j <= z_grid.j_max; ++j) {
        const double t = 1.0 - std::pow(2.0, -j);
        const double box_z = prof.box_mass_at(t);
        const int n = z_grid.n_ang(j);
        for (int i = 0; i < n; ++i) {
            cplx z = std::polar(t, 2.0 * kPi * i / n);
            const double pm = std::abs(phi.eval(z));
            const double ratio = prof.box_mass_at(std::min(pm, 1.0 - 1e-15)) / box_z;
            if (ratio > out.sup_ratio) {
                out.sup_ratio = ratio;
                out.witness = z;
            }
            out.sup_u = std::max(out.sup_u, std::abs(u(z)));
        }
    }
    out.sup_shape = std::pow(out.sup_ratio, shape_pow);
    return out;
}

FunctionalReport thm6_condition_i(const WeightProfile& prof, int t_levels, int t_subpoints,
                                  int theta_count) {
    const double t0 = now_ms();
    FunctionalReport rep;
    rep.grid_desc = "dyadic t-levels 0.." + std::to_string(t_levels) + " x theta " +
                    std::to_string(theta_count);
    const double what0 = prof.omega_hat(0.0);
    rep.value = 0.0;
    for (int j = 0; j <= t_levels; ++j) {
        double level = 0.0;
        for (int s = 0; s < t_subpoints; ++s) {
            const double lo = 1.0 - std::pow(2.0, -j);
            const double t = lo + s * (std::pow(2.0, -j - 1) / t_subpoints);
            const double what_t = prof.omega_hat(t);
            for (int k = 0; k < theta_count; ++k) {
                const double r = t * k / (theta_count - 1.0);
                const double pr = (t - r) / (1.0 - t * r);
                const double v = prof.omega_hat(pr) * prof.omega_hat(r) / what_t;
                level = std::max(level, v);
                if (v > rep.value) {
                    rep.value = v;
                    rep.witness = cplx(r, t);
                }
            }
        }
        rep.levels.push_back(level);
    }
    // scale marker: omega-hat(0) is the r = t diagonal value
    rep.grid_desc += ", what0=" + std::to_string(what0);
    rep.wall_time_ms = now_ms() - t0;
    return rep;
}

Thm6Experiment thm6_lower_bound_experiment(const WeightProfile& prof, const AnalyticMap& phi,
                                           double p, int j_max, int angles) {
    if (!(p > 1.0)) throw std::invalid_argument("thm6 experiment needs p > 1");
    Thm6Experiment out;
    WeightProfile::GapExponents gap = prof.gap_exponents();
    out.ok = gap.ok;
    if (!gap.ok) return out;
    out.a = gap.a;
    out.b = gap.b;
    out.eps = gap.eps;
    const double expo = 2.0 * gap.a + 2.0 - gap.b;

    out.ratio_min = 1e300;
    out.ratio_max = 0.0;
    for (int j = 1; j <= j_max; ++j) {
        const double t = 1.0 - std::pow(2.0, -j);
        double min_pm = 1.0;
        double lhs = std::pow(1.0 - t * t, -expo);
        for (int i = 0; i < angles; ++i) {
            cplx w = std::polar(t, 2.0 * kPi * i / angles);
            const double pm = std::abs(phi.eval(w));
            min_pm = std::min(min_pm, pm);
            const double rhs = 1.0 / ((1.0 - pm) * prof.omega_hat(pm));
            const double ratio = lhs / rhs;
            out.ratio_min = std::min(out.ratio_min, ratio);
            out.ratio_max = std::max(out.ratio_max, ratio);
        }
        out.w_modulus.push_back(t);
        out.phi_min_modulus.push_back(min_pm);
        out.lhs.push_back(lhs);
        out.rhs.push_back(1.0 / ((1.0 - min_pm) * prof.omega_hat(min_pm)));
    }
    out.final_phi_modulus = out.phi_min_modulus.back();
    return out;
}

namespace {

double cor7_expression(double r, double t) {
    const double e1 = std::log(M_E * (1.0 - r * t) / ((1.0 - t) * (1.0 + r)));
    const double e2 = std::log(M_E / (1.0 - r));
    const double e3 = std::log(M_E / (1.0 - t));
    return e1 * e2 / e3;
}

}  // namespace

double corollary7_C1(int t_levels, int t_subpoints, int theta_count,
                     std::pair<double, double>* witness) {
    double best = 1e300;
    for (int j = 0; j <= t_levels; ++j) {
        const double lo = 1.0 - std::pow(2.0, -j);
        for (int s = 0; s < t_subpoints; ++s) {
            const double t = lo + s * (std::pow(2.0, -j - 1) / t_subpoints);
            for (int k = 0; k < theta_count; ++k) {
                const double r = t * k / (theta_count - 1.0);
                const double v = cor7_expression(r, t);
                if (v < best) {
                    best = v;
                    if (witness) *witness = {r, t};
                }
            }
        }
    }
    return best;
}

bool corollary7_condition_b(double alpha, int t_levels, int t_subpoints, int theta_count) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::invalid_argument("condition (b) needs 0 < alpha <= 1");
    for (int j = 0; j <= t_levels; ++j) {
        const double lo = 1.0 - std::pow(2.0, -j);
        for (int s = 0; s < t_subpoints; ++s) {
            const double t = lo + s * (std::pow(2.0, -j - 1) / t_subpoints);
            for (int k = 0; k < theta_count; ++k) {
                const double r = t * k / (theta_count - 1.0);
                const double lhs =
                    std::pow(std::log(M_E * (1.0 - r * t) / ((1.0 - t) * (1.0 + r))), alpha) +
                    std::pow(std::log(M_E / (1.0 - r)), alpha);
                const double rhs = std::pow(std::log(M_E / (1.0 - t)), alpha);
                if (!(lhs >= rhs)) return false;
            }
        }
    }
    return true;
}

}  // namespace bergman

// bergman: weighted-Bergman-space toolkit front end.
//   weight <spec>                weight classification report
//   functional <kind> ...        operator functionals on a scenario
//   verify <suite>               assertion suites with machine-readable summary
// Exit codes: 0 pass, 1 usage/spec error, 2 mathematical flag or failed
// assertions.
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <CLI11.hpp>

#include "bergman/scenario.hpp"
#include "bergman/verify.hpp"
#include "bergman/version.hpp"

using namespace bergman;

namespace {

std::string out_path(const std::string& dir, const std::string& file) {
    if (dir.empty()) return file;
    std::filesystem::create_directories(dir);
    return dir + "/" + file;
}

int cmd_weight(const std::string& spec, const std::string& out_dir, int levels) {
    auto prof = profile_for(spec);

    std::ostringstream csv;
    csv << "r,omega,omega_hat,omega_star,reg_ratio,dd_ratio\n";
    for (double r : prof->grid()) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r,
                      prof->density(r), prof->omega_hat(r), prof->omega_star(r),
                      prof->omega_hat(r) / ((1.0 - r) * prof->density(r)),
                      prof->omega_hat(r) / prof->omega_hat(0.5 * (1.0 + r)));
        csv << buf;
    }
    write_text_atomic(out_path(out_dir, "weight_table.csv"), csv.str());

    RunConfig cfg;
    cfg.command = "weight";
    cfg.target = spec;
    cfg.grids.J = levels;
    ordered_json j;
    j["weight"] = prof->weight().name();
    j["class"] = prof->regular() ? "regular"
                                 : (prof->rapidly_increasing() ? "rapidly_increasing"
                                                               : "inconclusive");
    j["reg_ratio"] = {{"inf", prof->reg_lo()}, {"sup", prof->reg_hi()}};
    j["dd_constant"] = prof->dd_constant();
    j["A"] = prof->A();
    j["B"] = prof->B();
    j["condition_ii"] = prof->condition_ii();
    j["exponents"] = {{"found", prof->exponents_found()},
                      {"a", prof->a_exp()},
                      {"b", prof->b_exp()},
                      {"delta", prof->delta()}};
    j["config"] = cfg.canonical();
    write_json_atomic(out_path(out_dir, "weight_report.json"), j);

    std::printf("%s: %s  reg_ratio=[%.4g, %.4g]  A=%.4g B=%.4g cond_ii=%s\n", spec.c_str(),
                j["class"].get<std::string>().c_str(), prof->reg_lo(), prof->reg_hi(),
                prof->A(), prof->B(), prof->condition_ii() ? "true" : "false");
    return prof->inconclusive() ? 2 : 0;
}

int cmd_functional(const std::string& kind, const std::string& scenario_path, double gamma,
                   int levels, int j0, int oracle_N, double r, const std::string& out_dir,
                   bool phir, bool exponent_switch, const std::string& bracket) {
    Scenario sc = Scenario::load(scenario_path);
    if (gamma >= 0.0) sc.gamma = gamma;
    if (levels > 0) sc.grids.J = levels;
    if (j0 > 0) sc.grids.j0 = j0;
    if (oracle_N > 0) sc.grids.oracle_N = oracle_N;
    if (r > 0.0) sc.grids.r = r;
    OperatorSpec spec = sc.build();

    RunConfig cfg;
    cfg.command = "functional";
    cfg.kind = kind;
    cfg.target = scenario_path;
    cfg.grids = sc.grids;
    cfg.gamma = sc.gamma;
    cfg.out_dir = out_dir;
    if (!bracket.empty()) {
        auto comma = bracket.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("--bracket wants 'lo,hi'");
        cfg.bracket = {std::stod(bracket.substr(0, comma)),
                       std::stod(bracket.substr(comma + 1))};
    }

    FunctionalReport rep;
    AGrid grid{1, sc.grids.J, 4096};
    if (kind == "bounded") {
        rep = boundedness_functional(spec, grid, sc.grids.J);
    } else if (kind == "essnorm") {
        rep = essential_norm_functional(spec, grid, sc.grids.J);
    } else if (kind == "psi") {
        rep = psi_mixed_norm(spec, 5, std::min(sc.grids.J, 8), exponent_switch);
    } else if (kind == "schatten") {
        rep = schatten_functional(spec, spec.p, sc.grids.r, std::min(sc.grids.J, 8),
                                  std::min(sc.grids.J, 8));
    } else if (kind == "carleson") {
        rep = carleson_constant(spec.mu, *spec.profile, spec.p, spec.q, grid);
    } else if (kind == "multbound") {
        MultiplierBoundReport mb =
            multiplier_bound_profile(spec.u, spec.phi, *spec.profile, spec.p, grid);
        rep.value = mb.sup_ratio;
        rep.witness = mb.witness;
        rep.levels = {mb.sup_ratio, mb.sup_shape, mb.sup_u, mb.blaschke_constant,
                      mb.implied_constant};
        rep.grid_desc = grid.describe() + " (levels: ratio, shape, sup|u|, K, implied)";
    } else if (kind == "thm6") {
        rep = thm6_condition_i(*spec.profile);
        Thm6Experiment ex = thm6_lower_bound_experiment(*spec.profile, spec.phi, spec.p);
        if (!ex.ok) rep.flag = FuncFlag::exponent_gap_violated;
    } else {
        std::fprintf(stderr, "unknown functional kind '%s'\n", kind.c_str());
        return 1;
    }

    if (phir && spec.q < spec.p) {
        FunctionalReport extra = phi_r_functional(spec, sc.grids.r);
        std::printf("phi_r (experimental): %.8g\n", extra.value);
    }

    write_json_atomic(out_path(out_dir, kind + "_report.json"), report_to_json(rep, cfg));
    write_text_atomic(out_path(out_dir, kind + "_levels.csv"), levels_csv(rep));

    std::printf("%s: value=%.8g flag=%s witness=(%.6g, %.6g)\n", kind.c_str(), rep.value,
                to_string(rep.flag), rep.witness.real(), rep.witness.imag());
    if (cfg.bracket &&
        !(rep.value >= cfg.bracket->first && rep.value <= cfg.bracket->second)) {
        std::printf("value outside bracket [%g, %g]\n", cfg.bracket->first,
                    cfg.bracket->second);
        return 2;
    }
    return rep.flag == FuncFlag::ok ? 0 : 2;
}

int cmd_verify(const std::string& suite, const std::string& out_dir, int levels, int oracle_N) {
    VerifyOptions opts;
    if (levels > 0) opts.a_grid_J = opts.quad_J = levels;
    if (oracle_N > 0) opts.oracle_N = oracle_N;

    std::vector<std::string> names;
    if (suite == "all")
        names = suite_names();
    else
        names = {suite};

    std::vector<SuiteResult> results;
    bool pass = true;
    for (const std::string& name : names) {
        SuiteResult res = run_suite(name, opts);
        std::printf("suite %-8s %s  (%d/%zu passed, %.1fs)\n", res.suite.c_str(),
                    res.pass() ? "PASS" : "FAIL",
                    static_cast<int>(res.assertions.size()) - res.fail_count(),
                    res.assertions.size(), res.wall_time_ms / 1000.0);
        for (const Assertion& a : res.assertions) {
            double margin = std::min(a.value - a.lo, a.hi - a.value);
            std::printf("  %-52s %s value=%-12.6g margin=%-10.4g %s\n", a.name.c_str(),
                        a.pass ? "ok  " : "FAIL", a.value, margin, a.note.c_str());
        }
        pass = pass && res.pass();
        results.push_back(std::move(res));
    }
    write_json_atomic(out_path(out_dir, "verify_summary.json"), summary_json(results));
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical toolkit for weighted Bergman spaces"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir, bracket;
    int levels = 0, j0 = 0, oracle_N = 0;
    double gamma = -1.0, r = 0.0;
    app.add_option("--out", out_dir, "output directory for reports");
    app.add_option("--levels", levels, "dyadic refinement depth J");
    app.add_option("--j0", j0, "first tail level for limsup estimates");
    app.add_option("--oracle-N", oracle_N, "matrix oracle truncation");
    app.add_option("--gamma", gamma, "test-function shape parameter");
    app.add_option("--r", r, "pseudo-hyperbolic radius");
    app.add_option("--bracket", bracket, "lo,hi acceptance bracket for functional values");

    auto* wcmd = app.add_subcommand("weight", "classify a radial weight");
    std::string wspec;
    wcmd->add_option("spec", wspec, "weight spec, e.g. std:alpha=1")->required();

    auto* fcmd = app.add_subcommand("functional", "compute an operator functional");
    std::string kind, scenario;
    bool phir = false, exponent_switch = false;
    fcmd->add_option("kind", kind,
                     "bounded|essnorm|psi|schatten|carleson|multbound|thm6")
        ->required();
    fcmd->add_option("--scenario", scenario, "scenario JSON path")->required();
    fcmd->add_flag("--experimental-phir", phir, "also evaluate the experimental Phi_r");
    fcmd->add_flag("--exponent-switch", exponent_switch,
                   "psi integrand with exponent q instead of the printed p");

    auto* vcmd = app.add_subcommand("verify", "run assertion suites");
    std::string suite;
    vcmd->add_option("suite", suite,
                     "weights|geometry|kernels|thm1|thm2|thm3|thm4|thm5|thm6|cor7|all")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (wcmd->parsed()) return cmd_weight(wspec, out_dir, levels > 0 ? levels : 12);
        if (fcmd->parsed())
            return cmd_functional(kind, scenario, gamma, levels, j0, oracle_N, r, out_dir,
                                  phir, exponent_switch, bracket);
        if (vcmd->parsed()) return cmd_verify(suite, out_dir, levels, oracle_N);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}

#include "bergman/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "bergman/version.hpp"

namespace bergman {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::map<std::string, std::string> parse_kv(const std::string& s, char sep) {
    std::map<std::string, std::string> out;
    for (const std::string& part : split(s, sep)) {
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value in '" + part + "'");
        out[part.substr(0, eq)] = part.substr(eq + 1);
    }
    return out;
}

double to_double(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        for (const std::string& cell : split(line, ','))
            if (!cell.empty()) row.push_back(to_double(cell));
        if (!row.empty()) rows.push_back(row);
    }
    return rows;
}

}  // namespace

cplx parse_complex(std::string s) {
    // forms: "a", "bi", "a+bi", "a-bi"
    if (s.empty()) throw std::invalid_argument("empty complex literal");
    if (s.back() == 'i' || s.back() == 'I') {
        s.pop_back();
        // split at the last +/- that is not an exponent sign or leading sign
        for (size_t pos = s.size(); pos-- > 1;) {
            char c = s[pos];
            if ((c == '+' || c == '-') && s[pos - 1] != 'e' && s[pos - 1] != 'E') {
                double re = to_double(s.substr(0, pos));
                std::string imtxt = s.substr(pos);
                double im = (imtxt == "+" || imtxt == "-") ? (imtxt == "+" ? 1.0 : -1.0)
                                                           : to_double(imtxt);
                return {re, im};
            }
        }
        double im = (s == "" || s == "+") ? 1.0 : (s == "-" ? -1.0 : to_double(s));
        return {0.0, im};
    }
    return {to_double(s), 0.0};
}

Weight parse_weight(const std::string& spec) {
    if (spec == "osc") return Weight::oscillating();
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bad weight spec '" + spec + "'");
    const std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
    if (head == "std") {
        auto kv = parse_kv(rest, ',');
        return Weight::standard(to_double(kv.at("alpha")));
    }
    if (head == "logpow") {
        auto kv = parse_kv(rest, ',');
        return Weight::log_power(to_double(kv.at("alpha")), to_double(kv.at("beta")));
    }
    if (head == "exp") {
        auto kv = parse_kv(rest, ',');
        return Weight::exponential(to_double(kv.at("alpha")), to_double(kv.at("beta")));
    }
    if (head == "file") {
        std::vector<std::pair<double, double>> nodes;
        for (const auto& row : read_csv_rows(rest)) {
            if (row.size() != 2)
                throw std::invalid_argument("weight CSV rows need 'r,w'");
            nodes.emplace_back(row[0], row[1]);
        }
        return Weight::custom_sampled(std::move(nodes));
    }
    throw std::invalid_argument("unknown weight family '" + head + "'");
}

AnalyticMap parse_map(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("bad map spec '" + spec + "'");
    const std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
    if (head == "poly" || head == "affine") {
        std::vector<cplx> coeffs;
        for (const std::string& c : split(rest, ',')) coeffs.push_back(parse_complex(c));
        if (head == "affine") {
            if (coeffs.size() != 2) throw std::invalid_argument("affine needs 'c0,c1'");
            return AnalyticMap::affine(coeffs[0], coeffs[1]);
        }
        return AnalyticMap::polynomial(std::move(coeffs));
    }
    if (head == "blaschke") {
        int m = 0;
        std::vector<cplx> zeros;
        for (const std::string& part : split(rest, ';')) {
            if (part.empty()) continue;
            auto eq = part.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("bad blaschke field '" + part + "'");
            const std::string key = part.substr(0, eq), val = part.substr(eq + 1);
            if (key == "m")
                m = static_cast<int>(to_double(val));
            else if (key == "zeros")
                for (const std::string& z : split(val, ',')) zeros.push_back(parse_complex(z));
            else
                throw std::invalid_argument("unknown blaschke field '" + key + "'");
        }
        return AnalyticMap::blaschke(m, std::move(zeros));
    }
    if (head == "recip") {
        auto kv = parse_kv(rest, ';');
        return AnalyticMap::reciprocal_power(parse_complex(kv.at("w")), to_double(kv.at("alpha")));
    }
    throw std::invalid_argument("unknown map kind '" + head + "'");
}

Measure parse_measure(const std::string& spec) {
    if (spec == "area") return Measure::area();
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("bad measure spec '" + spec + "'");
    const std::string head = spec.substr(0, colon), rest = spec.substr(colon + 1);
    if (head == "warea") return Measure::warea(profile_for(rest));
    if (head == "atoms") {
        std::vector<Atom> atoms;
        for (const auto& row : read_csv_rows(rest)) {
            if (row.size() != 3)
                throw std::invalid_argument("atom CSV rows need 're,im,mass'");
            atoms.push_back({cplx(row[0], row[1]), row[2]});
        }
        return Measure::zero().with_atoms(std::move(atoms));
    }
    if (head == "density") {
        if (rest == "flat")
            return Measure::density("flat", [](cplx) { return 1.0; }, true);
        if (rest == "parabolic")
            return Measure::density("parabolic", [](cplx z) { return 1.0 - std::norm(z); }, true);
        if (rest == "ring")
            return Measure::density(
                "ring",
                [](cplx z) {
                    double d = std::abs(z) - 0.6;
                    return std::exp(-40.0 * d * d);
                },
                true);
        throw std::invalid_argument("unknown density '" + rest + "'");
    }
    throw std::invalid_argument("unknown measure kind '" + head + "'");
}

std::shared_ptr<const WeightProfile> profile_for(const Weight& w) {
    static std::map<std::string, std::shared_ptr<const WeightProfile>> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(w.name());
    if (it == cache.end())
        it = cache.emplace(w.name(), std::make_shared<WeightProfile>(w)).first;
    return it->second;
}

std::shared_ptr<const WeightProfile> profile_for(const std::string& weight_spec) {
    return profile_for(parse_weight(weight_spec));
}

Scenario Scenario::from_json(const ordered_json& j) {
    Scenario sc;
    sc.name = j.value("name", "scenario");
    sc.weight_spec = j.value("weight", sc.weight_spec);
    sc.u_spec = j.value("u", sc.u_spec);
    sc.phi_spec = j.value("phi", sc.phi_spec);
    sc.mu_spec = j.value("mu", std::string());
    sc.p = j.value("p", 2.0);
    sc.q = j.value("q", 2.0);
    sc.gamma = j.value("gamma", -1.0);
    if (j.contains("grids")) {
        const auto& g = j.at("grids");
        sc.grids.J = g.value("J", sc.grids.J);
        sc.grids.j0 = g.value("j0", sc.grids.j0);
        sc.grids.oracle_N = g.value("N", sc.grids.oracle_N);
        sc.grids.r = g.value("r", sc.grids.r);
    }
    return sc;
}

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario '" + path + "'");
    ordered_json j = ordered_json::parse(in);
    Scenario sc = from_json(j);
    if (sc.name == "scenario") sc.name = path;
    return sc;
}

ordered_json Scenario::to_json() const {
    ordered_json j;
    j["name"] = name;
    j["weight"] = weight_spec;
    j["u"] = u_spec;
    j["phi"] = phi_spec;
    j["mu"] = mu_spec.empty() ? ("warea:" + weight_spec) : mu_spec;
    j["p"] = p;
    j["q"] = q;
    j["gamma"] = gamma;
    j["grids"] = {{"J", grids.J}, {"j0", grids.j0}, {"N", grids.oracle_N}, {"r", grids.r}};
    return j;
}

OperatorSpec Scenario::build() const {
    auto prof = profile_for(weight_spec);
    Measure mu = mu_spec.empty() ? Measure::warea(prof) : parse_measure(mu_spec);
    return OperatorSpec::make(prof, parse_map(u_spec), parse_map(phi_spec), std::move(mu), p,
                              q, gamma);
}

ordered_json RunConfig::canonical() const {
    ordered_json j;
    j["version"] = kVersion;
    j["command"] = command;
    j["kind"] = kind;
    j["target"] = target;
    j["grids"] = {{"J", grids.J}, {"j0", grids.j0}, {"N", grids.oracle_N}, {"r", grids.r}};
    j["gamma"] = gamma;
    if (bracket)
        j["bracket"] = {bracket->first, bracket->second};
    else
        j["bracket"] = nullptr;
    j["out"] = out_dir;
    return j;
}

ordered_json report_to_json(const FunctionalReport& rep, const RunConfig& cfg) {
    ordered_json j;
    j["value"] = rep.value;
    j["witness"] = {rep.witness.real(), rep.witness.imag()};
    j["flag"] = to_string(rep.flag);
    j["grid"] = rep.grid_desc;
    j["levels"] = rep.levels;
    j["wall_time_ms"] = rep.wall_time_ms;
    j["config"] = cfg.canonical();
    return j;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename into '" + path + "'");
}

void write_json_atomic(const std::string& path, const ordered_json& j) {
    write_text_atomic(path, j.dump(2) + "\n");
}

std::string levels_csv(const FunctionalReport& rep) {
    std::ostringstream out;
    out << "level,value\n";
    for (size_t i = 0; i < rep.levels.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, rep.levels[i]);
        out << buf;
    }
    return out.str();
}

}  // namespace bergman

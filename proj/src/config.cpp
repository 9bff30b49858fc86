#include "logconc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logconc/errors.hpp"

namespace logconc {

using nlohmann::json;

const std::vector<std::string>& known_suites() {
    static const std::vector<std::string> names = {
        "constants",   "profiles",     "distances",    "bounds",
        "transference", "mollification", "metric_chain", "semigroup"};
    return names;
}

namespace {

std::vector<double> parse_args(const std::string& inner) {
    std::vector<double> out;
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        out.push_back(v);
    }
    return out;
}

}  // namespace

MeasureSpec parse_measure_spec(const std::string& text, const GridRequest& grid) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw ConfigError("measure spec '" + text + "': expected family(args)");
    std::string family = text.substr(0, open);
    family.erase(std::remove_if(family.begin(), family.end(), ::isspace), family.end());
    std::vector<double> a;
    try {
        a = parse_args(text.substr(open + 1, close - open - 1));
    } catch (const std::exception&) {
        throw ConfigError("measure spec '" + text + "': non-numeric argument");
    }

    MeasureSpec s;
    if (family == "gaussian") {
        if (a.size() != 2) throw ConfigError("gaussian(mean,sd) takes 2 arguments");
        s = MeasureSpec::gaussian_spec(a[0], a[1]);
    } else if (family == "exponential" || family == "exponential_symmetric") {
        if (a.size() != 1) throw ConfigError("exponential(scale) takes 1 argument");
        s = MeasureSpec::exponential_spec(a[0]);
    } else if (family == "uniform") {
        if (a.size() != 2) throw ConfigError("uniform(a,b) takes 2 arguments");
        s = MeasureSpec::uniform_spec(a[0], a[1]);
    } else if (family == "mixture" || family == "gaussian_mixture") {
        if (a.size() < 6 || a.size() % 3 != 0)
            throw ConfigError("mixture(w,m,s,...) takes 3k arguments, k >= 2");
        std::vector<double> w, mu, sd;
        for (std::size_t i = 0; i < a.size(); i += 3) {
            w.push_back(a[i]);
            mu.push_back(a[i + 1]);
            sd.push_back(a[i + 2]);
        }
        s = MeasureSpec::mixture_spec(w, mu, sd);
    } else if (family == "radial") {
        if (a.size() != 2) throw ConfigError("radial(n,scale) takes 2 arguments");
        const int n = static_cast<int>(std::lround(a[0]));
        const double scale = a[1];
        if (n < 1 || !(scale > 0.0)) throw ConfigError("radial(n,scale): n >= 1, scale > 0");
        // gaussian radial potential v(r) = r^2 / (2 scale^2), tabulated densely
        std::vector<double> r, v;
        const double rmax = scale * (std::sqrt(static_cast<double>(n)) + 12.0);
        for (int k = 0; k <= 2048; ++k) {
            const double rr = rmax * static_cast<double>(k) / 2048.0;
            r.push_back(rr);
            v.push_back(0.5 * rr * rr / (scale * scale));
        }
        s = MeasureSpec::radial_spec(n, std::move(r), std::move(v));
    } else {
        throw ConfigError("unknown measure family '" + family + "'");
    }
    s.grid = grid;
    return s;
}

namespace {

MeasureSpec spec_from_json(const json& j, const GridRequest& grid, const std::string& name,
                           std::vector<std::string>& errors) {
    try {
        if (j.is_string()) return parse_measure_spec(j.get<std::string>(), grid);
        if (!j.is_object()) throw ConfigError("measure must be a string or an object");
        const std::string family = j.at("family").get<std::string>();
        MeasureSpec s;
        if (family == "gaussian") {
            s = MeasureSpec::gaussian_spec(j.at("mean").get<double>(), j.at("sd").get<double>());
        } else if (family == "exponential" || family == "exponential_symmetric") {
            s = MeasureSpec::exponential_spec(j.at("scale").get<double>());
        } else if (family == "uniform") {
            s = MeasureSpec::uniform_spec(j.at("a").get<double>(), j.at("b").get<double>());
        } else if (family == "gaussian_mixture" || family == "mixture") {
            s = MeasureSpec::mixture_spec(j.at("weights").get<std::vector<double>>(),
                                          j.at("means").get<std::vector<double>>(),
                                          j.at("sds").get<std::vector<double>>());
        } else if (family == "potential") {
            s = MeasureSpec::potential_spec(j.at("x").get<std::vector<double>>(),
                                            j.at("v").get<std::vector<double>>());
        } else if (family == "radial") {
            if (j.contains("r")) {
                s = MeasureSpec::radial_spec(j.at("n").get<int>(),
                                             j.at("r").get<std::vector<double>>(),
                                             j.at("v").get<std::vector<double>>());
            } else {
                std::ostringstream os;
                os << "radial(" << j.at("n").get<int>() << ","
                   << (j.contains("scale") ? j.at("scale").get<double>() : 1.0) << ")";
                return parse_measure_spec(os.str(), grid);
            }
        } else {
            throw ConfigError("unknown measure family '" + family + "'");
        }
        s.grid = grid;
        if (j.contains("n")) s.grid.n = j.at("n").get<std::size_t>();
        return s;
    } catch (const std::exception& e) {
        errors.push_back("measure '" + name + "': " + e.what());
        return MeasureSpec::gaussian_spec(0.0, 1.0);
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    std::vector<std::string> errors;
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    RunConfig cfg;
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        if (g.contains("n")) cfg.grid.n = g["n"].get<std::size_t>();
        if (g.contains("tail_mass")) cfg.grid.tail_mass = g["tail_mass"].get<double>();
    }
    if (cfg.grid.n < 64) errors.push_back("grid.n must be >= 64");

    if (j.contains("measures")) {
        if (!j["measures"].is_object()) {
            errors.push_back("measures must be an object of name -> spec");
        } else {
            for (auto it = j["measures"].begin(); it != j["measures"].end(); ++it)
                cfg.measures.emplace_back(it.key(), spec_from_json(it.value(), cfg.grid,
                                                                   it.key(), errors));
        }
    }

    if (j.contains("suites")) {
        for (const auto& s : j["suites"]) {
            const std::string name = s.get<std::string>();
            if (std::find(known_suites().begin(), known_suites().end(), name) ==
                known_suites().end())
                errors.push_back("unknown suite name '" + name + "'");
            else
                cfg.suites.push_back(name);
        }
    }

    auto has_measure = [&](const std::string& name) {
        for (const auto& [n, _] : cfg.measures)
            if (n == name) return true;
        return false;
    };
    if (j.contains("references")) {
        for (const auto& pair : j["references"]) {
            if (!pair.is_array() || pair.size() != 2) {
                errors.push_back("references entries must be [nu, mu] name pairs");
                continue;
            }
            const std::string nu = pair[0].get<std::string>();
            const std::string mu = pair[1].get<std::string>();
            if (!has_measure(nu)) errors.push_back("reference pair cites undefined measure '" + nu + "'");
            if (!has_measure(mu)) errors.push_back("reference pair cites undefined measure '" + mu + "'");
            cfg.references.emplace_back(nu, mu);
        }
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        if (o.contains("dir")) cfg.out_dir = o["dir"].get<std::string>();
        if (o.contains("formats")) {
            cfg.formats.clear();
            for (const auto& f : o["formats"]) {
                const std::string fmt = f.get<std::string>();
                if (fmt != "csv" && fmt != "json")
                    errors.push_back("unknown output format '" + fmt + "'");
                else
                    cfg.formats.push_back(fmt);
            }
        }
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("slack")) cfg.slack = j["slack"].get<double>();
    if (!(cfg.slack >= 0.0) || cfg.slack >= 1.0) errors.push_back("slack must lie in [0, 1)");

    if (!errors.empty()) {
        std::ostringstream os;
        os << "config: " << errors.size() << " error(s):";
        for (const std::string& e : errors) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    return cfg;
}

RunConfig validate_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace logconc

#include "iccbf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace iccbf {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double number_at(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double require_number(const Json& j, const std::string& key, const std::string& path) {
    return number_at(require(j, key, path), path + "." + key);
}

int require_int(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string require_string(const Json& j, const std::string& key, const std::string& path) {
    const Json& v = require(j, key, path);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

Vec vec_at(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    Vec out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Box box_at(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of [lo, hi] pairs");
    std::vector<std::array<double, 2>> axes;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        if (!j[i].is_array() || j[i].size() != 2) fail(p, "expected [lo, hi]");
        axes.push_back({number_at(j[i][0], p + "[0]"), number_at(j[i][1], p + "[1]")});
    }
    try {
        return Box(std::move(axes));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

SystemModel system_from_json(const Json& j, const std::string& path) {
    const std::string kind = require_string(j, "system", path);
    SystemModel model = [&]() -> SystemModel {
        try {
            if (kind == "double_integrator") {
                return make_double_integrator(require_number(j, "dt", path),
                                              require_number(j, "u_max", path),
                                              require_number(j, "wall", path));
            }
            if (kind == "unicycle") {
                const Vec center = vec_at(require(j, "obstacle_center", path),
                                          path + ".obstacle_center");
                if (center.size() != 2) fail(path + ".obstacle_center", "expected two numbers");
                return make_unicycle(require_number(j, "dt", path),
                                     require_number(j, "v_max", path),
                                     require_number(j, "omega_max", path), {center[0], center[1]},
                                     require_number(j, "obstacle_radius", path));
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            fail(path, e.what());
        }
        fail(path + ".system", "unknown system '" + kind + "'");
    }();
    if (j.contains("state_box")) {
        Box box = box_at(j.at("state_box"), path + ".state_box");
        if (box.dim() != static_cast<std::size_t>(model.state_dim()))
            fail(path + ".state_box", "expected " + std::to_string(model.state_dim()) + " axes");
        model.set_state_box(std::move(box));
    }
    return model;
}

NominalSpec nominal_from_json(const Json& j, const std::string& path) {
    NominalSpec spec;
    spec.type = require_string(j, "type", path);
    if (spec.type == "constant") {
        spec.u = vec_at(require(j, "u", path), path + ".u");
    } else if (spec.type == "unicycle_goto") {
        spec.goal = vec_at(require(j, "goal", path), path + ".goal");
        if (spec.goal.size() != 2) fail(path + ".goal", "expected two numbers");
        if (j.contains("v_gain")) spec.v_gain = number_at(j.at("v_gain"), path + ".v_gain");
        if (j.contains("omega_gain"))
            spec.omega_gain = number_at(j.at("omega_gain"), path + ".omega_gain");
    } else {
        fail(path + ".type", "unknown nominal controller '" + spec.type + "'");
    }
    return spec;
}

} // namespace

ClassKFn classk_from_json(const Json& j, const std::string& path) {
    const std::string kind = require_string(j, "kind", path);
    try {
        if (kind == "linear") {
            const bool exponential = j.value("exponential_cbf_mode", false);
            return ClassKFn::linear(require_number(j, "gamma", path), exponential);
        }
        if (kind == "saturating")
            return ClassKFn::saturating(require_number(j, "scale", path),
                                        require_number(j, "knee", path));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
    fail(path + ".kind", "unknown class-K kind '" + kind + "'");
}

Json classk_to_json(const ClassKFn& fn) {
    Json j;
    if (fn.kind() == ClassKKind::Linear) {
        j["kind"] = "linear";
        j["gamma"] = fn.gamma();
        if (fn.exponential_boundary()) j["exponential_cbf_mode"] = true;
    } else {
        j["kind"] = "saturating";
        j["scale"] = fn.scale();
        j["knee"] = fn.knee();
    }
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("scenario '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario(j);
}

Scenario parse_scenario(const Json& j) {
    if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");
    const std::string schema = require_string(j, "schema", "scenario");
    if (schema != "iccbf/1")
        fail("scenario.schema", "unsupported schema '" + schema + "', expected 'iccbf/1'");

    Scenario scenario{system_from_json(require(j, "system", "scenario"), "scenario.system"),
                      {},
                      11,
                      {},
                      std::nullopt,
                      std::nullopt};

    if (j.contains("input_resolution")) {
        if (!j.at("input_resolution").is_number_integer())
            fail("scenario.input_resolution", "expected an integer");
        scenario.input_resolution = j.at("input_resolution").get<int>();
        if (scenario.input_resolution < 2) fail("scenario.input_resolution", "must be at least 2");
    }

    // Candidates: either a list of {id, alpha} entries or a single top-level
    // "alpha" block.
    auto parse_candidate = [](const Json& cj, const std::string& path,
                              const std::string& fallback_id) -> AlphaVector {
        std::string id = fallback_id;
        const Json* alpha_block = &cj;
        if (cj.is_object()) {
            if (cj.contains("id")) {
                if (!cj.at("id").is_string()) fail(path + ".id", "expected a string");
                id = cj.at("id").get<std::string>();
            }
            alpha_block = &require(cj, "alpha", path);
        }
        if (!alpha_block->is_array() || alpha_block->empty())
            fail(path + ".alpha", "expected a non-empty array of class-K functions");
        std::vector<ClassKFn> fns;
        for (std::size_t i = 0; i < alpha_block->size(); ++i)
            fns.push_back(classk_from_json((*alpha_block)[i],
                                           path + ".alpha[" + std::to_string(i) + "]"));
        try {
            return AlphaVector(std::move(fns), id);
        } catch (const Error& e) {
            fail(path, e.what());
        }
    };

    if (j.contains("candidates")) {
        const Json& cands = j.at("candidates");
        if (!cands.is_array() || cands.empty())
            fail("scenario.candidates", "expected a non-empty array");
        for (std::size_t i = 0; i < cands.size(); ++i)
            scenario.candidates.push_back(
                parse_candidate(cands[i], "scenario.candidates[" + std::to_string(i) + "]",
                                "cand" + std::to_string(i)));
    } else if (j.contains("alpha")) {
        Json wrapper;
        wrapper["alpha"] = j.at("alpha");
        scenario.candidates.push_back(parse_candidate(wrapper, "scenario", "cand0"));
    }

    scenario.validation.input_resolution = scenario.input_resolution;
    if (j.contains("validation")) {
        const Json& v = j.at("validation");
        if (!v.is_object()) fail("scenario.validation", "expected an object");
        if (v.contains("state_resolution"))
            scenario.validation.state_resolution = require_int(v, "state_resolution",
                                                               "scenario.validation");
        if (v.contains("input_resolution"))
            scenario.validation.input_resolution = require_int(v, "input_resolution",
                                                               "scenario.validation");
        if (v.contains("max_evals")) {
            const int budget = require_int(v, "max_evals", "scenario.validation");
            if (budget < 0) fail("scenario.validation.max_evals", "must be non-negative");
            scenario.validation.max_evals = static_cast<std::uint64_t>(budget);
        }
    }

    if (j.contains("rollout")) {
        const Json& r = j.at("rollout");
        RolloutSpec spec;
        spec.x0 = vec_at(require(r, "x0", "scenario.rollout"), "scenario.rollout.x0");
        if (spec.x0.size() != static_cast<std::size_t>(scenario.model.state_dim()))
            fail("scenario.rollout.x0",
                 "expected " + std::to_string(scenario.model.state_dim()) + " numbers");
        spec.horizon = require_int(r, "horizon", "scenario.rollout");
        if (spec.horizon < 1) fail("scenario.rollout.horizon", "must be at least 1");
        spec.nominal = nominal_from_json(require(r, "nominal", "scenario.rollout"),
                                         "scenario.rollout.nominal");
        // The adapt block may sit inside the rollout or at the top level.
        const Json* adapt = nullptr;
        std::string adapt_path;
        if (r.contains("adapt")) {
            adapt = &r.at("adapt");
            adapt_path = "scenario.rollout.adapt";
        } else if (j.contains("adapt")) {
            adapt = &j.at("adapt");
            adapt_path = "scenario.adapt";
        }
        if (adapt) {
            if (!adapt->is_object()) fail(adapt_path, "expected an object");
            if (adapt->contains("enabled")) {
                if (!adapt->at("enabled").is_boolean())
                    fail(adapt_path + ".enabled", "expected a boolean");
                spec.adapt_enabled = adapt->at("enabled").get<bool>();
            }
            if (adapt->contains("dwell")) {
                spec.dwell = require_int(*adapt, "dwell", adapt_path);
                if (spec.dwell < 1) fail(adapt_path + ".dwell", "must be at least 1");
            }
        }
        scenario.rollout = std::move(spec);
    }

    if (j.contains("sweep")) {
        const Json& s = j.at("sweep");
        const Json& g = require(s, "gammas", "scenario.sweep");
        if (!g.is_array() || g.empty())
            fail("scenario.sweep.gammas", "expected a non-empty array of per-level gamma lists");
        SweepSpec spec;
        for (std::size_t lvl = 0; lvl < g.size(); ++lvl) {
            const std::string p = "scenario.sweep.gammas[" + std::to_string(lvl) + "]";
            const Vec values = vec_at(g[lvl], p);
            if (values.empty()) fail(p, "expected at least one gamma");
            for (double gamma : values)
                if (!(gamma > 0.0) || !(gamma < 1.0)) fail(p, "gammas must lie in (0, 1)");
            spec.gammas.push_back(values);
        }
        scenario.sweep = std::move(spec);
    }

    if (!scenario.candidates.empty()) {
        const int depth = scenario.candidates.front().depth();
        for (const AlphaVector& alpha : scenario.candidates)
            if (alpha.depth() != depth)
                fail("scenario.candidates", "all candidates must share the same depth");
    }
    return scenario;
}

namespace {

Json vec_to_json(const Vec& v) {
    Json arr = Json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

} // namespace

Json report_to_json(const ValidationReport& report) {
    Json j;
    j["alpha_id"] = report.alpha_id;
    j["verdict"] = to_string(report.verdict);
    // Grid certification is numerical evidence at this resolution, not a
    // formal proof; a negative result is a genuine refutation.
    j["certified_on_grid_only"] = true;
    if (std::isnan(report.zeta_star))
        j["zeta_star"] = nullptr;
    else
        j["zeta_star"] = report.zeta_star;
    j["worst_state"] = vec_to_json(report.worst_state);
    Json cexs = Json::array();
    for (const Vec& x : report.counterexamples) cexs.push_back(vec_to_json(x));
    j["counterexamples"] = std::move(cexs);
    j["c_star_count"] = report.c_star_count;
    Json grid;
    grid["state_resolution"] = report.grid.state_resolution;
    grid["input_resolution"] = report.grid.input_resolution;
    grid["state_points"] = report.grid.state_points;
    Json box = Json::array();
    for (const auto& axis : report.grid.state_box) box.push_back({axis[0], axis[1]});
    grid["state_box"] = std::move(box);
    j["grid"] = std::move(grid);
    j["states_evaluated"] = report.states_evaluated;
    j["complete"] = report.complete;
    return j;
}

Json candidate_report_to_json(const CandidateReport& entry) {
    Json j = report_to_json(entry.report);
    Json alpha = Json::array();
    for (const ClassKFn& fn : entry.alpha.alphas()) alpha.push_back(classk_to_json(fn));
    j["alpha"] = std::move(alpha);
    if (!entry.error.empty()) j["error"] = entry.error;
    return j;
}

Json metrics_to_json(const Metrics& metrics) {
    Json j;
    j["min_h"] = metrics.min_h;
    j["violation"] = metrics.violation;
    j["mean_deviation"] = metrics.mean_deviation;
    if (std::isnan(metrics.progress))
        j["progress"] = nullptr;
    else
        j["progress"] = metrics.progress;
    j["switches"] = metrics.switches;
    return j;
}

NominalController make_nominal(const NominalSpec& spec, const SystemModel& model) {
    if (spec.type == "constant") {
        if (spec.u.size() != static_cast<std::size_t>(model.input_dim()))
            throw ConfigError("nominal.u: expected " + std::to_string(model.input_dim()) +
                              " numbers");
        return constant_controller(spec.u);
    }
    if (spec.type == "unicycle_goto") {
        if (model.name() != "unicycle")
            throw ConfigError("nominal.type: unicycle_goto requires the unicycle system");
        return unicycle_goto_controller(model, spec.goal, spec.v_gain, spec.omega_gain);
    }
    throw ConfigError("nominal.type: unknown controller '" + spec.type + "'");
}

std::string gnuplot_script(const std::string& csv_name, const SystemModel& model, int levels) {
    std::ostringstream os;
    os << "# Trajectory plot; run with: gnuplot -p <this file>\n";
    os << "set datafile separator ','\n";
    os << "set key autotitle columnhead\n";
    os << "set xlabel 't'\n";
    const int n = model.state_dim();
    const int m = model.input_dim();
    const int b0_col = 1 + n + 2 * m + 1;  // t, x..., u_nom..., u_safe..., then b0
    os << "plot";
    for (int i = 0; i < levels; ++i) {
        os << " '" << csv_name << "' using 1:" << (b0_col + i) << " with lines";
        if (i + 1 < levels) os << ",";
    }
    os << ", '" << csv_name << "' using 1:" << (b0_col + levels) << " with lines\n";
    return os.str();
}

} // namespace iccbf

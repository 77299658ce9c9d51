#include "iccbf/scenario.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace iccbf;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitRefuted = 2;
constexpr int kExitVacuous = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitConfig = 64;

struct CommonFlags {
    std::string scenario_path;
    std::string out = ".";
    int state_res = 0;   // 0 = scenario value
    int input_res = 0;
    long long max_evals = -1;
    bool plot = false;
    bool skip_validation = false;
};

int env_threads() {
    const char* raw = std::getenv("ICCBF_THREADS");
    if (!raw) return 0;
    const int value = std::atoi(raw);
    return value > 0 ? value : 0;
}

void apply_overrides(Scenario& scenario, const CommonFlags& flags) {
    if (flags.state_res > 0) scenario.validation.state_resolution = flags.state_res;
    if (flags.input_res > 0) {
        scenario.validation.input_resolution = flags.input_res;
        scenario.input_resolution = flags.input_res;
    }
    if (flags.max_evals >= 0)
        scenario.validation.max_evals = static_cast<std::uint64_t>(flags.max_evals);
    scenario.validation.threads = env_threads();
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    if (dir.empty()) dir = ".";
    fs::create_directories(dir);
    return dir;
}

// --out may name either a directory or a .json file for the report itself.
fs::path report_path(const std::string& out) {
    fs::path p(out);
    if (p.extension() == ".json") {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        return p;
    }
    return ensure_out_dir(out) / "report.json";
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << text;
}

int verdict_exit_code(const std::vector<CandidateReport>& reports) {
    bool all_certified = true;
    bool any_refuted = false;
    bool any_vacuous = false;
    for (const CandidateReport& r : reports) {
        const bool ok = r.error.empty() && r.report.verdict == Verdict::Certified;
        all_certified = all_certified && ok;
        if (r.error.empty() && r.report.verdict == Verdict::Refuted) any_refuted = true;
        if (!r.error.empty() || r.report.verdict == Verdict::VacuousEmptyCStar) any_vacuous = true;
    }
    if (all_certified) return 0;
    if (any_refuted) return kExitRefuted;
    return any_vacuous ? kExitVacuous : kExitRefuted;
}

int cmd_validate(const CommonFlags& flags) {
    Scenario scenario = load_scenario(flags.scenario_path);
    apply_overrides(scenario, flags);
    if (scenario.candidates.empty())
        throw ConfigError("scenario.candidates: validate needs at least one candidate");

    const std::vector<CandidateReport> reports =
        certify_candidates(scenario.model, scenario.candidates, scenario.validation);

    Json out = Json::array();
    for (const CandidateReport& r : reports) out.push_back(candidate_report_to_json(r));
    write_text(report_path(flags.out), out.dump(2) + "\n");

    for (const CandidateReport& r : reports) {
        std::cout << r.alpha.id() << ": "
                  << (r.error.empty() ? to_string(r.report.verdict) : "error: " + r.error);
        if (r.error.empty() && !std::isnan(r.report.zeta_star))
            std::cout << " (zeta_star = " << format_double(r.report.zeta_star) << ")";
        std::cout << "\n";
    }
    return verdict_exit_code(reports);
}

struct SimOutcome {
    TrajectoryLog log;
    std::string candidate_label;
};

SimOutcome run_rollout_from_scenario(const Scenario& scenario,
                                     std::vector<CertifiedEntry> usable) {
    const RolloutSpec& spec = *scenario.rollout;
    const NominalController nominal = make_nominal(spec.nominal, scenario.model);
    const CascadeSettings settings{scenario.input_resolution, true};

    if (spec.adapt_enabled) {
        AdaptiveSelector selector(scenario.model, CertifiedSet(std::move(usable)), settings,
                                  AdaptOptions{spec.dwell});
        return {rollout_adaptive(selector, nominal, spec.x0, spec.horizon), "adaptive"};
    }
    BarrierCascade cascade(scenario.model, usable.front().alpha, settings);
    return {rollout(cascade, nominal, spec.x0, spec.horizon), usable.front().alpha.id()};
}

int cmd_simulate(const CommonFlags& flags) {
    Scenario scenario = load_scenario(flags.scenario_path);
    apply_overrides(scenario, flags);
    if (scenario.candidates.empty())
        throw ConfigError("scenario.candidates: simulate needs at least one candidate");
    if (!scenario.rollout) throw ConfigError("scenario.rollout: simulate needs a rollout block");

    std::vector<CertifiedEntry> usable;
    if (flags.skip_validation) {
        // Bypass recorded in metrics.json; reports carry the verdict the
        // selector requires without a certification run backing it.
        for (const AlphaVector& alpha : scenario.candidates) {
            ValidationReport report;
            report.verdict = Verdict::Certified;
            report.alpha_id = alpha.id();
            usable.push_back({alpha, std::move(report)});
        }
    } else {
        const std::vector<CandidateReport> reports =
            certify_candidates(scenario.model, scenario.candidates, scenario.validation);
        for (const CandidateReport& r : reports)
            if (r.error.empty() && r.report.verdict == Verdict::Certified)
                usable.push_back({r.alpha, r.report});
        if (usable.empty()) {
            std::cerr << "no candidate certified; nothing to simulate\n";
            return verdict_exit_code(reports);
        }
    }

    const fs::path dir = ensure_out_dir(flags.out);
    const SimOutcome outcome = run_rollout_from_scenario(scenario, std::move(usable));

    std::ostringstream csv;
    write_trajectory_csv(csv, outcome.log, scenario.model);
    write_text(dir / "trajectory.csv", csv.str());

    Json meta;
    meta["terminal"] = to_string(outcome.log.terminal.kind);
    meta["terminal_t"] = outcome.log.terminal.t;
    meta["candidate"] = outcome.candidate_label;
    meta["skip_validation"] = flags.skip_validation;
    bool violation = false;
    if (!outcome.log.steps.empty()) {
        std::optional<Vec> goal;
        if (scenario.rollout->nominal.type == "unicycle_goto")
            goal = scenario.rollout->nominal.goal;
        const Metrics metrics = compute_metrics(outcome.log, scenario.model, goal);
        meta["metrics"] = metrics_to_json(metrics);
        violation = metrics.violation;
    } else {
        meta["metrics"] = nullptr;
    }
    write_text(dir / "metrics.json", meta.dump(2) + "\n");

    if (flags.plot) {
        const int levels = scenario.candidates.front().size();
        write_text(dir / "plot.gp", gnuplot_script("trajectory.csv", scenario.model, levels));
    }

    std::cout << "terminal: " << to_string(outcome.log.terminal.kind) << " at t=" <<
        outcome.log.terminal.t << "\n";
    if (outcome.log.terminal.kind != TerminalKind::Completed) return kExitInfeasible;
    return violation ? kExitViolation : 0;
}

std::string gamma_id(const std::vector<double>& gammas) {
    std::string id = "g";
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (i > 0) id += "_";
        id += format_double(gammas[i]);
    }
    return id;
}

int cmd_sweep(const CommonFlags& flags) {
    Scenario scenario = load_scenario(flags.scenario_path);
    apply_overrides(scenario, flags);
    if (!scenario.sweep) throw ConfigError("scenario.sweep: sweep needs a sweep block");

    // Cartesian product of the per-level gamma lists, row-major.
    std::vector<std::vector<double>> combos;
    combos.push_back({});
    for (const std::vector<double>& level : scenario.sweep->gammas) {
        std::vector<std::vector<double>> next;
        next.reserve(combos.size() * level.size());
        for (const std::vector<double>& prefix : combos)
            for (double gamma : level) {
                std::vector<double> combo = prefix;
                combo.push_back(gamma);
                next.push_back(std::move(combo));
            }
        combos = std::move(next);
    }

    std::vector<AlphaVector> candidates;
    candidates.reserve(combos.size());
    for (const std::vector<double>& combo : combos) {
        std::vector<ClassKFn> fns;
        fns.reserve(combo.size());
        for (double gamma : combo) fns.push_back(ClassKFn::linear(gamma));
        candidates.emplace_back(std::move(fns), gamma_id(combo));
    }

    const std::size_t levels = scenario.sweep->gammas.size();
    struct Row {
        std::string id;
        std::vector<double> gammas;
        std::string verdict;
        double zeta_star = 0.0;
        bool has_metrics = false;
        Metrics metrics;
    };
    std::vector<Row> rows(candidates.size());

    // Candidates are independent; validation threads stay at one per worker so
    // the parallelism lives across rows. Row values never depend on the
    // schedule, and assembly below is sequential in row order.
    ValidateOptions per_candidate = scenario.validation;
    per_candidate.threads = 1;
    const int workers = scenario.validation.threads > 0 ? scenario.validation.threads :
#ifdef _OPENMP
                                                          omp_get_max_threads();
#else
                                                          1;
#endif
    const std::int64_t n_rows = static_cast<std::int64_t>(candidates.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (std::int64_t i = 0; i < n_rows; ++i) {
        const AlphaVector& alpha = candidates[static_cast<std::size_t>(i)];
        Row row;
        row.id = alpha.id();
        row.gammas = combos[static_cast<std::size_t>(i)];
        try {
            const ValidationReport report = validate(scenario.model, alpha, per_candidate);
            row.verdict = to_string(report.verdict);
            row.zeta_star = report.zeta_star;
            if (report.verdict == Verdict::Certified && scenario.rollout) {
                const CascadeSettings settings{scenario.input_resolution, true};
                BarrierCascade cascade(scenario.model, alpha, settings);
                const NominalController nominal =
                    make_nominal(scenario.rollout->nominal, scenario.model);
                const TrajectoryLog log =
                    rollout(cascade, nominal, scenario.rollout->x0, scenario.rollout->horizon);
                if (!log.steps.empty()) {
                    std::optional<Vec> goal;
                    if (scenario.rollout->nominal.type == "unicycle_goto")
                        goal = scenario.rollout->nominal.goal;
                    row.metrics = compute_metrics(log, scenario.model, goal);
                    row.has_metrics = true;
                }
            }
        } catch (const Error& e) {
            row.verdict = std::string("error: ") + e.what();
        }
        rows[static_cast<std::size_t>(i)] = std::move(row);
    }

    std::ostringstream csv;
    csv << "id";
    for (std::size_t l = 0; l < levels; ++l) csv << ",gamma" << l;
    csv << ",verdict,zeta_star,min_h,violation,mean_deviation,progress,switches\n";
    for (const Row& row : rows) {
        csv << row.id;
        for (double gamma : row.gammas) csv << ',' << format_double(gamma);
        csv << ',' << row.verdict << ',';
        if (!std::isnan(row.zeta_star) && row.verdict.rfind("error", 0) != 0)
            csv << format_double(row.zeta_star);
        if (row.has_metrics) {
            csv << ',' << format_double(row.metrics.min_h) << ',' << (row.metrics.violation ? 1 : 0)
                << ',' << format_double(row.metrics.mean_deviation) << ','
                << (std::isnan(row.metrics.progress) ? "" : format_double(row.metrics.progress))
                << ',' << row.metrics.switches;
        } else {
            csv << ",,,,,";
        }
        csv << '\n';
    }
    const fs::path dir = ensure_out_dir(flags.out);
    write_text(dir / "sweep.csv", csv.str());

    std::size_t certified = 0;
    for (const Row& row : rows)
        if (row.verdict == "Certified") ++certified;
    std::cout << certified << " of " << rows.size() << " candidates certified\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete-time barrier cascade toolkit: certification, safety filtering and "
                 "closed-loop simulation under bounded inputs"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&flags](CLI::App* cmd, bool sim_flags) {
        cmd->add_option("--scenario", flags.scenario_path, "Scenario JSON file")->required();
        cmd->add_option("--out", flags.out, "Output directory (or .json path for validate)");
        cmd->add_option("--state-res", flags.state_res, "State grid points per axis");
        cmd->add_option("--input-res", flags.input_res, "Input grid points per axis");
        cmd->add_option("--max-evals", flags.max_evals, "Validation budget in state-grid points");
        if (sim_flags) {
            cmd->add_flag("--plot", flags.plot, "Emit a gnuplot script next to the CSV");
            cmd->add_flag("--skip-validation", flags.skip_validation,
                          "Simulate without certifying candidates first");
        }
    };

    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Certify or refute candidate parameter vectors");
    add_common(validate_cmd, false);
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "Closed-loop safety-filtered rollout");
    add_common(simulate_cmd, true);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Certify a gamma grid and tabulate rollout metrics");
    add_common(sweep_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    try {
        if (app.got_subcommand(validate_cmd)) return cmd_validate(flags);
        if (app.got_subcommand(simulate_cmd)) return cmd_simulate(flags);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(flags);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

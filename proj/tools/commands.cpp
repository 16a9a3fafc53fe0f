#include "commands.hpp"

#include "qenergy/qenergy.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qenergy::cli {
namespace {

using json = nlohmann::ordered_json;

// Lets CLI11 read --config files written as JSON. Nested objects address subcommands,
// e.g. {"simon": {"quantum": {"n": 4}}}.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, "", {}, items);
        return items;
    }

private:
    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        throw CLI::ConversionError("unsupported config value " + v.dump());
    }

    static void collect(const nlohmann::json& j, const std::string& name, std::vector<std::string> prefix,
                        std::vector<CLI::ConfigItem>& items) {
        if (j.is_object()) {
            if (!name.empty()) prefix.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) collect(*it, it.key(), prefix, items);
            return;
        }
        if (name.empty()) throw CLI::ConversionError("config root must be an object");
        CLI::ConfigItem item;
        item.name = name;
        item.parents = prefix;
        if (j.is_array())
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        else
            item.inputs.push_back(scalar(j));
        items.push_back(std::move(item));
    }
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        std::string s;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) s += ',';
                s += cells[i];
            }
            s += '\n';
        };
        line(header);
        for (const auto& r : rows) line(r);
        return s;
    }
};

struct Global {
    std::string output;
    std::string format = "json";
    std::size_t workers = 0;
};

std::filesystem::path resolve_output(const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("QENERGY_OUTPUT_DIR"); dir && *dir) p = std::filesystem::path(dir) / p;
    }
    return p;
}

void emit(const Global& g, const std::string& text, std::ostream& out) {
    if (g.output.empty()) {
        out << text;
        return;
    }
    const auto path = resolve_output(g.output);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

void write_side_file(const std::string& name, const std::string& text) {
    const auto path = resolve_output(name);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

json envelope(const std::string& command, json config) {
    json j;
    j["tool"] = "qenergy";
    j["version"] = qenergy::version;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

std::size_t workers_of(const Global& g) { return g.workers ? g.workers : default_workers(); }

// ---- erasure ----

struct ErasureArgs {
    std::size_t d = 2;
    double epsilon = 0.01, eta = 0.1, beta = 1.0;
    std::string state = "random";
    std::string state_file;
    std::string steps = "auto";
    std::optional<std::uint64_t> seed;
};

DensityOperator read_state_file(const std::string& path, std::size_t d) {
    std::ifstream f(resolve_output(path));
    if (!f) throw ValidationError("cannot read state file " + path);
    nlohmann::json j;
    f >> j;
    const auto& re = j.at("real");
    if (re.size() != d) throw ValidationError("state file dimension does not match --d");
    ComplexMatrix m(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) {
            const double im = j.contains("imag") ? j["imag"].at(r).at(c).get<double>() : 0.0;
            m(r, c) = cplx(re.at(r).at(c).get<double>(), im);
        }
    return DensityOperator(m);
}

int cmd_erasure(const ErasureArgs& a, const Global& g, std::ostream& out) {
    landauer::ErasureConfig cfg{a.beta, a.epsilon, a.eta, a.d};
    cfg.validate();
    const bool stochastic = a.state == "random" || a.state == "pure";
    if (stochastic && !a.seed) throw ValidationError("--seed is required for --state " + a.state);

    DensityOperator rho = DensityOperator::maximally_mixed(a.d);
    if (a.state == "random") {
        Rng rng(*a.seed);
        rho = random_mixed_state(a.d, rng);
    } else if (a.state == "pure") {
        Rng rng(*a.seed);
        rho = random_pure_state(a.d, rng);
    } else if (a.state == "file") {
        if (a.state_file.empty()) throw ValidationError("--state file needs --state-file");
        rho = read_state_file(a.state_file, a.d);
    } else if (a.state != "mixed") {
        throw ValidationError("unknown --state " + a.state);
    }

    const bool automatic = a.steps == "auto";
    std::size_t steps = 0;
    if (automatic) {
        steps = landauer::required_steps(cfg);
    } else {
        try {
            std::size_t pos = 0;
            const long long v = std::stoll(a.steps, &pos);
            if (pos != a.steps.size() || v < 2) throw std::invalid_argument("");
            steps = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw ValidationError("--steps must be auto or an integer >= 2");
        }
    }
    const auto plan = landauer::build_plan(rho, cfg, steps);
    const auto rep = landauer::execute(plan, cfg);
    const double bound = automatic ? cfg.eta : landauer::generic_excess_bound(cfg, steps);
    const double prop2 = landauer::prop2_energy_bound(cfg, steps);

    constexpr double tol = 1e-9;
    const bool excess_ok = rep.excess >= -tol && rep.excess <= bound + tol;
    const bool fidelity_ok = rep.final_infidelity <= cfg.epsilon + tol;
    const bool energy_ok = rep.max_env_energy <= prop2 + tol;

    json cfgj;
    cfgj["d"] = a.d;
    cfgj["epsilon"] = a.epsilon;
    cfgj["eta"] = a.eta;
    cfgj["beta"] = a.beta;
    cfgj["state"] = a.state;
    cfgj["state_file"] = a.state_file;
    cfgj["steps"] = a.steps;
    cfgj["seed"] = a.seed ? json(*a.seed) : json(nullptr);

    json res;
    res["T"] = rep.steps;
    res["Q_E"] = rep.heat;
    res["beta_Q_E"] = a.beta * rep.heat;
    res["delta_S"] = rep.delta_s;
    res["excess"] = rep.excess;
    res["excess_bound"] = bound;
    res["eta"] = a.eta;
    res["epsilon"] = a.epsilon;
    res["final_infidelity"] = rep.final_infidelity;
    res["max_env_energy"] = rep.max_env_energy;
    res["prop2_bound"] = prop2;
    res["checks"] = {{"excess", excess_ok}, {"fidelity", fidelity_ok}, {"env_energy", energy_ok}};

    if (g.format == "csv") {
        Table t{{"T", "Q_E", "delta_S", "excess", "excess_bound", "eta", "epsilon", "final_infidelity",
                 "max_env_energy", "prop2_bound"},
                {{std::to_string(rep.steps), num(rep.heat), num(rep.delta_s), num(rep.excess), num(bound),
                  num(a.eta), num(a.epsilon), num(rep.final_infidelity), num(rep.max_env_energy), num(prop2)}}};
        emit(g, t.csv(), out);
    } else {
        json j = envelope("erasure", cfgj);
        j["result"] = res;
        emit(g, j.dump(2) + "\n", out);
    }
    return excess_ok && fidelity_ok && energy_ok ? ok : check_failed;
}

// ---- shared cost flags ----

struct CostArgs {
    ledger::CostModel cost;
    void add(CLI::App* app) {
        app->add_option("--e-qubit", cost.e_qubit, "qubit energy gap")->capture_default_str();
        app->add_option("--e-ctrl", cost.e_ctrl, "control energy per qubit per depth")->capture_default_str();
        app->add_option("--c-ctrl-env", cost.c_ctrl_env, "erasure control coefficient")->capture_default_str();
        app->add_option("--beta", cost.beta, "inverse temperature")->capture_default_str();
        app->add_option("--eta", cost.eta, "erasure excess budget")->capture_default_str();
        app->add_option("--epsilon", cost.epsilon, "erasure infidelity")->capture_default_str();
        app->add_option("--d-swap", cost.d_swap, "depth of one swap")->capture_default_str();
    }
    json to_json() const {
        return {{"e_qubit", cost.e_qubit}, {"e_ctrl", cost.e_ctrl}, {"c_ctrl_env", cost.c_ctrl_env},
                {"beta", cost.beta},       {"eta", cost.eta},       {"epsilon", cost.epsilon},
                {"d_swap", cost.d_swap}};
    }
};

// ---- simon ----

struct SimonArgs {
    unsigned n = 4;
    std::size_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::string rounds = "auto";
    std::string m = "auto";
    std::string instances = "uniform";
    std::string key = simon::PRPConfig{}.key;
    unsigned prp_rounds = simon::PRPConfig{}.rounds;
    double delta_cap = 1.0 / 6.0;
    double delta_fail = 1.0 / 3.0;
    bool no_ledger = false;
    std::string trials_out;
    CostArgs cost;
};

std::size_t parse_count(const std::string& s, const char* flag) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size() || v < 1) throw std::invalid_argument("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ValidationError(std::string(flag) + " must be auto or a positive integer");
    }
}

struct Trial {
    int b = 0;
    int a = 0;
    std::size_t queries = 0;
    bool has_ledger = false;
    double total_w = 0, q_e = 0, q_e_prime = 0, residual = 0, lower = 0, theorem2 = 0;
    json ledger;  // full ledger, kept for the first trial only
};

json ledger_json(const ledger::EnergyLedger& l) {
    return {{"w", l.shape.w},
            {"m", l.shape.m},
            {"depths", l.shape.depths},
            {"e_qubit", l.e_qubit},
            {"beta", l.beta},
            {"eta", l.eta},
            {"epsilon", l.epsilon},
            {"erasure_steps", l.erasure_steps},
            {"delta_e_gates", l.delta_e_gates},
            {"delta_e_in", l.delta_e_in},
            {"delta_e_out", l.delta_e_out},
            {"delta_e_erase", l.delta_e_erase},
            {"ctrl_total", l.ctrl_total()},
            {"q_e", l.q_e},
            {"q_e_prime", l.q_e_prime},
            {"total_w", l.total_w()},
            {"conservation_residual", l.conservation_residual()}};
}

int cmd_simon_run(bool quantum, const SimonArgs& a, const Global& g, std::ostream& out) {
    simon::check_size(a.n);
    if (!a.seed) throw ValidationError("--seed is required");
    if (a.trials == 0) throw ValidationError("--trials must be positive");
    if (a.instances != "uniform" && a.instances != "prp") throw ValidationError("--instances must be uniform or prp");
    simon::PRPConfig prp{a.key, a.prp_rounds};
    if (a.instances == "prp") prp.validate();
    const simon::BoundParams bp{a.delta_cap, a.delta_fail};
    a.cost.cost.validate();

    std::size_t rounds = 0, m = 0;
    if (quantum) {
        if (a.n > simon::max_statevector_bits) throw ValidationError("quantum runs limited to n <= 10");
        rounds = a.rounds == "auto" ? simon::default_rounds(a.n) : parse_count(a.rounds, "--rounds");
        if (rounds < a.n + 1) throw ValidationError("--rounds must be at least n+1");
    } else {
        m = a.m == "auto" ? simon::prop3_queries_capped(a.n, bp) : parse_count(a.m, "--m");
        if (m > (std::size_t{1} << a.n)) throw ValidationError("--m exceeds 2^n");
    }
    bool with_ledger = !a.no_ledger;
    if (quantum && a.n > 6) with_ledger = false;
    if (!quantum && 2.0 * a.n * m > 2e5) with_ledger = false;

    const ledger::AlgorithmSpec spec{quantum ? ledger::Algorithm::quantum : ledger::Algorithm::classical, rounds, m};
    const auto k = ledger::dominating_constants(a.cost.cost);
    const std::uint64_t seed = *a.seed;

    const auto trials = parallel_map(
        a.trials,
        [&](std::size_t i) {
            Rng rng(seed, i);
            simon::SimonInstance inst;
            if (a.instances == "prp") {
                const int b = rng.coin() ? 1 : 0;
                const auto s = static_cast<simon::word>(1 + rng.below((std::uint64_t{1} << a.n) - 1));
                inst = simon::prp_instance(a.n, b, s, prp);
            } else {
                inst = simon::sample_uniform_instance(a.n, rng);
            }
            Trial t;
            t.b = inst.b;
            if (with_ledger) {
                const auto run = ledger::run_framework(inst, spec, a.cost.cost, rng);
                t.a = run.outcome.a;
                t.queries = run.outcome.m_used;
                t.has_ledger = true;
                t.total_w = run.ledger.total_w();
                t.q_e = run.ledger.q_e;
                t.q_e_prime = run.ledger.q_e_prime;
                t.residual = run.ledger.conservation_residual();
                t.lower = ledger::theorem4_lower(run.outcome, a.cost.cost.beta);
                t.theorem2 = ledger::theorem2_upper(run.ledger.shape, a.cost.cost, k);
                if (i == 0) t.ledger = ledger_json(run.ledger);
            } else if (quantum) {
                const auto r = simon::quantum_solve(inst, rounds, rng);
                t.a = r.a;
                t.queries = r.m_used;
            } else {
                t.a = simon::classical_solve(inst, m, rng).a;
                t.queries = m;
            }
            return t;
        },
        workers_of(g));

    std::size_t successes = 0;
    double queries = 0, tw = 0, qe = 0, qep = 0, resid = 0, lower = 0, t2 = 0;
    bool dominated = true;
    Table table{{"n", "b", "algorithm", "m", "a", "correct", "seed", "trial", "queries", "total_w", "q_e", "q_e_prime", "conservation_residual",
                 "theorem4_lower", "theorem2_upper"},
                {}};
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        successes += t.a == t.b;
        queries += static_cast<double>(t.queries);
        tw += t.total_w;
        qe += t.q_e;
        qep += t.q_e_prime;
        resid += t.residual;
        lower += t.lower;
        t2 += t.theorem2;
        if (t.has_ledger && t.total_w > t.theorem2) dominated = false;
        std::vector<std::string> row{std::to_string(a.n),
                                     std::to_string(t.b),
                                     quantum ? "quantum" : "classical",
                                     std::to_string(quantum ? rounds : m),
                                     std::to_string(t.a),
                                     std::to_string(t.a == t.b ? 1 : 0),
                                     std::to_string(seed),
                                     std::to_string(i),
                                     std::to_string(t.queries)};
        for (double v : {t.total_w, t.q_e, t.q_e_prime, t.residual, t.lower, t.theorem2})
            row.push_back(t.has_ledger ? num(v) : "");
        table.rows.push_back(std::move(row));
    }
    const double nt = static_cast<double>(a.trials);
    const double rate = static_cast<double>(successes) / nt;

    json checks = json::object();
    if (quantum) {
        checks["success_above_two_thirds_99"] = stats::wilson_lower(successes, a.trials) >= 2.0 / 3.0;
    } else if (a.m == "auto") {
        const double fail = 1.0 - rate;
        checks["failure_within_budget"] =
            fail <= a.delta_fail + 3.0 * stats::binomial_sigma(a.delta_fail, a.trials);
    } else if (m < simon::m_lower(a.n, bp)) {
        const double ceiling = simon::prop1_success_ceiling(a.n, m).value;
        checks["success_below_ceiling"] = rate <= ceiling + 3.0 * stats::binomial_sigma(ceiling, a.trials);
    }
    if (with_ledger) checks["ledger_below_upper_bound"] = dominated;

    json cfgj;
    cfgj["n"] = a.n;
    cfgj["trials"] = a.trials;
    cfgj["seed"] = seed;
    if (quantum)
        cfgj["rounds"] = rounds;
    else
        cfgj["m"] = m;
    cfgj["instances"] = a.instances;
    if (a.instances == "prp") cfgj["prp"] = {{"key", a.key}, {"rounds", a.prp_rounds}};
    cfgj["delta_cap"] = a.delta_cap;
    cfgj["delta_fail"] = a.delta_fail;
    cfgj["ledger"] = with_ledger;
    cfgj["cost"] = a.cost.to_json();
    if (with_ledger)
        cfgj["bound_constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"c3", k.c3}, {"p", k.p}, {"q", k.q}};

    if (!a.trials_out.empty()) write_side_file(a.trials_out, table.csv());
    if (g.format == "csv") {
        emit(g, table.csv(), out);
    } else {
        json res;
        res["success_rate"] = rate;
        res["successes"] = successes;
        res["wilson_lower_99"] = stats::wilson_lower(successes, a.trials);
        res["mean_queries"] = queries / nt;
        if (with_ledger) {
            res["ledger_totals"] = {{"mean_total_w", tw / nt},
                                    {"mean_q_e", qe / nt},
                                    {"mean_q_e_prime", qep / nt},
                                    {"mean_conservation_residual", resid / nt},
                                    {"mean_theorem4_lower", lower / nt},
                                    {"mean_theorem2_upper", t2 / nt}};
            res["first_trial_ledger"] = trials.front().ledger;
        } else {
            res["ledger_totals"] = nullptr;
        }
        res["checks"] = checks;
        json j = envelope(quantum ? "simon quantum" : "simon classical", cfgj);
        j["result"] = res;
        emit(g, j.dump(2) + "\n", out);
    }
    for (const auto& [name, v] : checks.items())
        if (!v.get<bool>()) return check_failed;
    return ok;
}

int cmd_simon_bounds(const SimonArgs& a, std::optional<std::uint64_t> m_arg, const Global& g, std::ostream& out) {
    simon::check_size(a.n);
    const simon::BoundParams bp{a.delta_cap, a.delta_fail};
    const auto ml = simon::m_lower(a.n, bp);
    const std::uint64_t m = m_arg ? *m_arg : (ml > 0 ? ml - 1 : 0);
    const auto ceiling = simon::prop1_success_ceiling(a.n, m);
    const auto p3 = simon::prop3_queries(a.n, bp);
    std::optional<double> l1;
    if (a.delta_cap > 0.0 && a.delta_cap < 1.0 / 6.0) l1 = simon::lemma1_floor(bp);

    json cfgj{{"n", a.n}, {"delta_cap", a.delta_cap}, {"delta_fail", a.delta_fail}, {"m", m}};
    if (g.format == "csv") {
        Table t{{"n", "delta_cap", "delta_fail", "m_lower", "prop3_queries", "m", "prop1_ceiling", "lemma1_floor"},
                {{std::to_string(a.n), num(a.delta_cap), num(a.delta_fail), std::to_string(ml), std::to_string(p3),
                  std::to_string(m), num(ceiling.value), l1 ? num(*l1) : ""}}};
        emit(g, t.csv(), out);
    } else {
        json j = envelope("simon bounds", cfgj);
        j["result"] = {{"m_lower", ml},
                       {"m_lower_real", simon::m_lower_real(a.n, a.delta_cap)},
                       {"prop3_queries", p3},
                       {"prop3_queries_capped", simon::prop3_queries_capped(a.n, bp)},
                       {"prop3_failure_bound", simon::prop3_failure_bound(a.n, p3)},
                       {"prop1_ceiling", ceiling.value},
                       {"prop1_ceiling_saturated", ceiling.saturated},
                       {"lemma1_floor", l1 ? json(*l1) : json(nullptr)}};
        emit(g, j.dump(2) + "\n", out);
    }
    return ok;
}

// ---- bounds ----

// Reference entries at 300 K, one significant figure.
const std::vector<std::pair<unsigned, double>>& published_table1() {
    static const std::vector<std::pair<unsigned, double>> t{{50, 2e-13}, {100, 1e-5},  {150, 7e2},
                                                            {200, 3e10}, {250, 1e18}, {300, 5e25}};
    return t;
}

double one_significant_figure(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double e = std::floor(std::log10(std::fabs(v)));
    const double scale = std::pow(10.0, e);
    return std::round(v / scale) * scale;
}

bool same_leading_figure(double a, double b) {
    return std::fabs(one_significant_figure(a) - one_significant_figure(b)) <= 1e-9 * std::fabs(b);
}

struct Table1Args {
    std::vector<unsigned> n{50, 100, 150, 200, 250, 300};
    std::vector<double> temps{300.0};
    std::string kb = "codata";
    bool check = false;
};

int cmd_table1(const Table1Args& a, const Global& g, std::ostream& out) {
    const auto mode = ledger::parse_kb_mode(a.kb);
    const auto rows = ledger::table1(a.temps, a.n, mode);
    bool all_match = true;
    json checks = json::array();
    if (a.check) {
        for (const auto& [n, want] : published_table1()) {
            for (const auto& r : rows)
                if (r.n == n && r.temp_k == 300.0) {
                    const bool match = same_leading_figure(r.joules, want);
                    all_match = all_match && match;
                    checks.push_back({{"n", n}, {"published", want}, {"computed", r.joules}, {"match", match}});
                }
        }
    }
    if (g.format == "json") {
        json j = envelope("bounds table1", {{"n", a.n}, {"temp_kelvin", a.temps}, {"kb", a.kb},
                                            {"k_b", ledger::boltzmann(mode)}, {"check", a.check}});
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", r.n}, {"temp_k", r.temp_k}, {"k_b_mode", ledger::to_string(r.mode)},
                           {"bound_joules", r.joules}});
        j["rows"] = arr;
        if (a.check) j["published_comparison"] = checks;
        emit(g, j.dump(2) + "\n", out);
    } else {
        Table t{{"n", "temp_k", "k_b_mode", "bound_joules"}, {}};
        for (const auto& r : rows)
            t.rows.push_back({std::to_string(r.n), num(r.temp_k), ledger::to_string(r.mode), num(r.joules)});
        emit(g, t.csv(), out);
    }
    return all_match ? ok : check_failed;
}

struct UpperArgs {
    std::vector<unsigned> n{4, 5, 6, 7, 8, 9, 10, 11, 12};
    ledger::BoundConstants k;
    CostArgs cost;
};

int cmd_quantum_upper(const UpperArgs& a, const Global& g, std::ostream& out) {
    a.cost.cost.validate();
    if (a.n.empty()) throw ValidationError("--n needs at least one value");
    Table t{{"n", "w", "m", "gate_depth", "total_depth", "volume", "theorem2_upper", "theorem3_upper"}, {}};
    std::vector<double> xs, v2, v3, vol, poly;
    json rows = json::array();
    for (unsigned n : a.n) {
        const auto shape = ledger::simon_shape(n, a.cost.cost);
        const double t2 = ledger::theorem2_upper(shape, a.cost.cost, a.k);
        const double t3 = ledger::theorem3_upper(shape, a.cost.cost, a.k);
        const double volume = static_cast<double>(shape.w) * static_cast<double>(shape.depths.back());
        const double wd = static_cast<double>(shape.w) * shape.total_depth(a.cost.cost.d_swap);
        xs.push_back(n);
        v2.push_back(t2);
        v3.push_back(t3);
        vol.push_back(volume);
        poly.push_back(std::pow(std::max(1.0, std::log(wd)), a.k.q));
        t.rows.push_back({std::to_string(n), std::to_string(shape.w), std::to_string(shape.m),
                          num(shape.gate_depth()), num(shape.total_depth(a.cost.cost.d_swap)), num(volume), num(t2),
                          num(t3)});
        rows.push_back({{"n", n},
                        {"w", shape.w},
                        {"m", shape.m},
                        {"gate_depth", shape.gate_depth()},
                        {"total_depth", shape.total_depth(a.cost.cost.d_swap)},
                        {"volume", volume},
                        {"theorem2_upper", t2},
                        {"theorem3_upper", t3}});
    }
    if (g.format == "json") {
        json cfgj{{"n", a.n},
                  {"constants", {{"c1", a.k.c1}, {"c2", a.k.c2}, {"c3", a.k.c3}, {"p", a.k.p}, {"q", a.k.q}}},
                  {"polylog_exponent_is_placeholder", true},
                  {"cost", a.cost.to_json()}};
        json j = envelope("bounds quantum-upper", cfgj);
        j["rows"] = rows;
        if (xs.size() >= 2) {
            j["fit"] = {{"theorem2_exponent", stats::loglog_slope(xs, v2)},
                        {"theorem3_exponent", stats::loglog_slope(xs, v3)},
                        {"volume_exponent", stats::loglog_slope(xs, vol)},
                        {"polylog_exponent", stats::loglog_slope(xs, poly)}};
        }
        emit(g, j.dump(2) + "\n", out);
    } else {
        emit(g, t.csv(), out);
    }
    return ok;
}

// ---- control ----

struct ControlArgs {
    std::string gate = "X";
    std::vector<std::size_t> l{8, 16, 32, 64};
    std::size_t ell0 = 1;
    double omega = 1.0;
    std::size_t haar = 200;
    std::optional<std::uint64_t> seed;
    std::size_t mc = 0;
};

int cmd_control(const ControlArgs& a, const Global& g, std::ostream& out) {
    if (!a.seed) throw ValidationError("--seed is required");
    if (a.l.empty()) throw ValidationError("--l needs at least one value");
    const ComplexMatrix u = control::named_gate(a.gate, *a.seed);
    Table t{{"gate", "L", "ell0", "omega", "avg_fidelity", "one_minus_f", "delta_s_c", "control_energy"}, {}};
    std::vector<double> ls, infid, scaled;
    bool energy_exact = true, commute = true;
    json mc = json::array();
    json rows = json::array();
    for (std::size_t big_l : a.l) {
        const control::LadderControl ctrl{big_l, a.ell0, a.omega, 0};
        const auto rep = control::control_diagnostics(u, ctrl, a.haar, *a.seed, workers_of(g));
        const double one_minus_f = 1.0 - rep.avg_fidelity;
        energy_exact = energy_exact && std::fabs(rep.control_energy - control::control_energy(ctrl)) <= 1e-9;
        commute = commute && rep.commutator_norm <= 1e-9;
        ls.push_back(static_cast<double>(big_l));
        infid.push_back(one_minus_f);
        scaled.push_back(static_cast<double>(big_l) * rep.delta_s_c);
        t.rows.push_back({a.gate, std::to_string(big_l), std::to_string(a.ell0), num(a.omega), num(rep.avg_fidelity),
                          num(one_minus_f), num(rep.delta_s_c), num(rep.control_energy)});
        rows.push_back({{"L", big_l},
                        {"avg_fidelity", rep.avg_fidelity},
                        {"one_minus_f", one_minus_f},
                        {"delta_s_c", rep.delta_s_c},
                        {"l_times_delta_s_c", scaled.back()},
                        {"control_energy", rep.control_energy},
                        {"commutator_norm", rep.commutator_norm}});
        if (a.mc > 1) {
            const auto est = control::average_fidelity_mc(u, ctrl, a.mc, *a.seed, workers_of(g));
            mc.push_back({{"L", big_l}, {"mean", est.mean}, {"stderr", est.stderr_}});
        }
    }
    bool positive = ls.size() >= 2;
    for (double v : infid) positive = positive && v > 1e-12;
    std::optional<double> slope;
    if (positive) slope = stats::loglog_slope(ls, infid);
    bool band_defined = ls.size() >= 2;
    for (double v : scaled) band_defined = band_defined && v > 1e-12;
    std::optional<double> band;
    if (band_defined) band = *std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end());

    json checks{{"control_energy_exact", energy_exact}, {"commutes_with_hamiltonian", commute}};
    if (slope) checks["slope_in_range"] = *slope >= -1.3 && *slope <= -0.7;
    if (band) checks["entropy_band_factor_two"] = *band <= 2.0;

    if (g.format == "json") {
        json j = envelope("control", {{"gate", a.gate},
                                      {"l", a.l},
                                      {"ell0", a.ell0},
                                      {"omega", a.omega},
                                      {"haar", a.haar},
                                      {"seed", *a.seed},
                                      {"mc_samples", a.mc}});
        j["rows"] = rows;
        j["slope_one_minus_f"] = slope ? json(*slope) : json(nullptr);
        j["entropy_band_ratio"] = band ? json(*band) : json(nullptr);
        if (a.mc > 1) j["monte_carlo_fidelity"] = mc;
        j["checks"] = checks;
        emit(g, j.dump(2) + "\n", out);
    } else {
        emit(g, t.csv(), out);
    }
    for (const auto& [name, v] : checks.items())
        if (!v.get<bool>()) return check_failed;
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy accounting for quantum and classical query algorithms", "qenergy"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qenergy::version));
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file of option values; flags override it");

    Global g;
    app.add_option("-o,--output", g.output, "report file (relative to $QENERGY_OUTPUT_DIR if set)");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--workers", g.workers, "worker threads (0 = all cores)")->capture_default_str();

    std::function<int()> action;

    ErasureArgs ea;
    auto* erasure = app.add_subcommand("erasure", "finite-step Landauer erasure of one state");
    erasure->fallthrough();
    erasure->add_option("--d", ea.d, "system dimension")->capture_default_str();
    erasure->add_option("--epsilon", ea.epsilon)->capture_default_str();
    erasure->add_option("--eta", ea.eta)->capture_default_str();
    erasure->add_option("--beta", ea.beta)->capture_default_str();
    erasure->add_option("--state", ea.state, "random|pure|mixed|file")
        ->check(CLI::IsMember({"random", "pure", "mixed", "file"}))
        ->capture_default_str();
    erasure->add_option("--state-file", ea.state_file, "JSON with real/imag matrices");
    erasure->add_option("--steps", ea.steps, "auto or a step count")->capture_default_str();
    erasure->add_option("--seed", ea.seed);
    erasure->callback([&] { action = [&] { return cmd_erasure(ea, g, out); }; });

    SimonArgs sa;
    std::optional<std::uint64_t> bounds_m;
    auto* simon_cmd = app.add_subcommand("simon", "Simon's problem experiments");
    simon_cmd->require_subcommand(1);
    simon_cmd->fallthrough();
    auto add_common = [&](CLI::App* c) {
        c->fallthrough();
        c->add_option("--n", sa.n, "problem size")->capture_default_str();
        c->add_option("--delta-cap", sa.delta_cap)->capture_default_str();
        c->add_option("--delta-fail", sa.delta_fail)->capture_default_str();
    };
    auto add_run = [&](CLI::App* c) {
        add_common(c);
        c->add_option("--trials", sa.trials)->capture_default_str();
        c->add_option("--seed", sa.seed);
        c->add_option("--instances", sa.instances, "uniform or prp")->capture_default_str();
        c->add_option("--key", sa.key, "PRP key bit string")->capture_default_str();
        c->add_option("--prp-rounds", sa.prp_rounds)->capture_default_str();
        c->add_flag("--no-ledger", sa.no_ledger, "skip the energy ledger");
        c->add_option("--trials-out", sa.trials_out, "also write per-trial CSV here");
        sa.cost.add(c);
    };
    auto* sq = simon_cmd->add_subcommand("quantum", "Fourier-twice sampling with verification");
    add_run(sq);
    sq->add_option("--rounds", sa.rounds, "auto (n+10) or a count")->capture_default_str();
    sq->callback([&] { action = [&] { return cmd_simon_run(true, sa, g, out); }; });
    auto* sc = simon_cmd->add_subcommand("classical", "random distinct queries, collision test");
    add_run(sc);
    sc->add_option("--m", sa.m, "auto or a query count")->capture_default_str();
    sc->callback([&] { action = [&] { return cmd_simon_run(false, sa, g, out); }; });
    auto* sb = simon_cmd->add_subcommand("bounds", "query-count bounds");
    add_common(sb);
    sb->add_option("--m", bounds_m, "query count for the success ceiling (default m_lower - 1)");
    sb->callback([&] { action = [&] { return cmd_simon_bounds(sa, bounds_m, g, out); }; });

    auto* bounds = app.add_subcommand("bounds", "energy bound calculators");
    bounds->require_subcommand(1);
    bounds->fallthrough();
    Table1Args ta;
    auto* t1 = bounds->add_subcommand("table1", "classical lower bound in joules");
    t1->fallthrough();
    t1->add_option("--n", ta.n)->delimiter(',')->capture_default_str();
    t1->add_option("--temp-kelvin", ta.temps)->delimiter(',')->capture_default_str();
    t1->add_option("--kb", ta.kb, "paper or codata")->check(CLI::IsMember({"paper", "codata"}))->capture_default_str();
    t1->add_flag("--check-published", ta.check, "compare with the published 300 K values");
    t1->callback([&] { action = [&] { return cmd_table1(ta, g, out); }; });
    UpperArgs ua;
    auto* qu = bounds->add_subcommand("quantum-upper", "ideal and fault-tolerant upper bounds on Simon shapes");
    qu->fallthrough();
    qu->add_option("--n", ua.n)->delimiter(',')->capture_default_str();
    qu->add_option("--c1", ua.k.c1)->capture_default_str();
    qu->add_option("--c2", ua.k.c2)->capture_default_str();
    qu->add_option("--c3", ua.k.c3)->capture_default_str();
    qu->add_option("--p", ua.k.p)->capture_default_str();
    qu->add_option("--q", ua.k.q, "polylog exponent (placeholder)")->capture_default_str();
    ua.cost.add(qu);
    qu->callback([&] { action = [&] { return cmd_quantum_upper(ua, g, out); }; });

    ControlArgs ca;
    auto* ctl = app.add_subcommand("control", "energy-preserving gate dilation on a ladder");
    ctl->fallthrough();
    ctl->add_option("--gate", ca.gate, "I, X, Z, H, T or random")->capture_default_str();
    ctl->add_option("--l", ca.l, "ladder window lengths")->delimiter(',')->capture_default_str();
    ctl->add_option("--ell0", ca.ell0)->capture_default_str();
    ctl->add_option("--omega", ca.omega)->capture_default_str();
    ctl->add_option("--haar", ca.haar, "Haar samples for the control entropy")->capture_default_str();
    ctl->add_option("--seed", ca.seed);
    ctl->add_option("--mc", ca.mc, "Monte Carlo samples for a fidelity cross-check")->capture_default_str();
    ctl->callback([&] { action = [&] { return cmd_control(ca, g, out); }; });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::CallForVersion&) {
        out << qenergy::version << "\n";
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
    try {
        return action ? action() : usage_error;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return usage_error;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace qenergy::cli

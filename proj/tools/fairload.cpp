#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fairload/integer_enum.hpp"
#include "fairload/json_io.hpp"
#include "fairload/lp.hpp"
#include "fairload/tree_equalizer.hpp"
#include "fairload/verifier.hpp"

namespace {

using namespace fairload;

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Json& payload, const std::string& out_path) {
    std::string text = payload.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        out << text;
    }
}

BipartiteInstance load_instance(const std::string& path) {
    return parse_instance_text(read_input(path));
}

Json loads_json(const BipartiteInstance& inst, const Assignment& x) {
    Json j = Json::object();
    if (x.kind == NumericKind::Rational && inst.all_linear()) {
        auto rep = evaluate_loads_exact(inst, x);
        for (int w = 0; w < inst.num_workers(); ++w)
            j[inst.workers[w]] = format_rational(rep.per_worker[w]);
    } else {
        auto rep = evaluate_loads(inst, x);
        for (int w = 0; w < inst.num_workers(); ++w) j[inst.workers[w]] = rep.per_worker[w];
    }
    return j;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
    auto pos = s.find("..");
    if (pos == std::string::npos) {
        std::uint64_t v = std::stoull(s);
        return {v, v};
    }
    return {std::stoull(s.substr(0, pos)), std::stoull(s.substr(pos + 2))};
}

int run(int argc, char** argv) {
    CLI::App app{"fair workload allocation on bipartite task/worker graphs"};
    app.require_subcommand(1);
    std::string out_path;
    bool meta = false;
    app.add_option("-o,--output", out_path, "output file (default stdout)");
    app.add_flag("--meta", meta, "print run metadata to stderr");

    // validate
    auto* validate = app.add_subcommand("validate", "check instance invariants");
    std::string validate_in;
    validate->add_option("input", validate_in, "instance JSON (or - for stdin)");

    // solve
    auto* solve = app.add_subcommand("solve", "exact LP objectives over X^a");
    std::string solve_in, objective;
    std::string solve_worker, solve_cap = "0";
    solve->add_option("--objective", objective, "min-max | max-min | min-spread | equal-feas | worker-max | worker-min")
        ->required();
    solve->add_option("--worker", solve_worker, "worker id for worker-max / worker-min");
    solve->add_option("--cap", solve_cap, "spread cap for worker-max / worker-min");
    solve->add_option("input", solve_in, "instance JSON");

    // equalize
    auto* equalize = app.add_subcommand("equalize", "equalize worker loads on a spanning tree");
    std::string eq_in, eq_start, eq_tree = "bfs", eq_tree_edges;
    double eq_tol = 1e-9;
    equalize->add_option("--start", eq_start, "starting assignment JSON file");
    equalize->add_option("--tree", eq_tree, "bfs | given")->check(CLI::IsMember({"bfs", "given"}));
    equalize->add_option("--tree-edges", eq_tree_edges, "comma list task:worker for --tree given");
    equalize->add_option("--tol", eq_tol, "tolerance for nonlinear instances");
    equalize->add_option("input", eq_in, "instance JSON");

    // enumerate
    auto* enumerate = app.add_subcommand("enumerate", "brute-force integral X^a study");
    std::string en_in;
    bool en_pareto = false, en_dump = false;
    std::uint64_t en_cap = 10'000'000;
    enumerate->add_flag("--pareto", en_pareto, "include the (lmax, lmin) Pareto frontier");
    enumerate->add_flag("--dump", en_dump, "stream every solution as a JSON line");
    enumerate->add_option("--cap", en_cap, "enumeration cap");
    enumerate->add_option("input", en_in, "instance JSON");

    // verify
    auto* verify = app.add_subcommand("verify", "random-instance theorem certification");
    std::string theorem, seeds = "1..100";
    GenParams vp;
    verify->add_option("--theorem", theorem, "prop1 | thm1 | thm2")->required();
    verify->add_option("--seeds", seeds, "seed range a..b");
    verify->add_option("--tasks", vp.num_tasks, "tasks per instance");
    int verify_workers = -1;
    verify->add_option("--workers", verify_workers, "workers per instance");
    verify->add_option("--density", vp.density, "edge probability");
    verify->add_option("--depth", vp.expr_depth, "expression depth (thm2)");

    // gen
    auto* gen = app.add_subcommand("gen", "deterministic random instance");
    GenParams gp;
    std::string gen_mode = "LINEAR_NONNEG";
    gen->add_option("--seed", gp.seed, "64-bit seed")->required();
    gen->add_option("--tasks", gp.num_tasks, "task count");
    gen->add_option("--workers", gp.num_workers, "worker count");
    gen->add_option("--density", gp.density, "edge probability");
    gen->add_option("--demand-min", gp.demand_min, "minimal demand");
    gen->add_option("--demand-max", gp.demand_max, "maximal demand");
    gen->add_option("--weight-max", gp.weight_max, "weight numerator/denominator bound");
    gen->add_option("--depth", gp.expr_depth, "expression depth (GENERAL_REAL)");
    gen->add_flag("--unit-weights", gp.unit_weights, "all-one weights");
    gen->add_option("--mode", gen_mode, "LINEAR_NONNEG | GENERAL_REAL")
        ->check(CLI::IsMember({"LINEAR_NONNEG", "GENERAL_REAL"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (meta) std::cerr << "fairload meta: argv parsed, pid " << ::getpid() << "\n";

    if (validate->parsed()) {
        auto inst = load_instance(validate_in);
        auto rep = validate_instance(inst);
        Json j;
        j["status"] = rep.ok() ? "OK" : "INVALID";
        j["violations"] = Json::array();
        for (const auto& item : rep.items)
            j["violations"].push_back({{"code", item.code}, {"message", item.message}});
        emit(j, out_path);
        return rep.ok() ? 0 : 1;
    }

    if (solve->parsed()) {
        auto inst = load_instance(solve_in);
        SolveResult res;
        if (objective == "min-max")
            res = solve_min_lmax(inst);
        else if (objective == "max-min")
            res = solve_max_lmin(inst);
        else if (objective == "min-spread")
            res = solve_min_spread(inst);
        else if (objective == "equal-feas")
            res = equal_load_feasible(inst);
        else if (objective == "worker-max" || objective == "worker-min") {
            int w = inst.worker_index(solve_worker);
            if (w < 0) throw ParseError("unknown worker '" + solve_worker + "'");
            Rat cap = parse_rational(solve_cap);
            res = objective == "worker-max" ? max_load_of_worker_given_spread(inst, w, cap)
                                            : min_load_of_worker_given_spread(inst, w, cap);
        } else {
            throw CLI::ValidationError("--objective", "unknown objective '" + objective + "'");
        }
        Json j;
        j["status"] = res.status == LpStatus::Optimal     ? "OPTIMAL"
                      : res.status == LpStatus::Infeasible ? "INFEASIBLE"
                                                           : "UNBOUNDED";
        j["objective"] = objective;
        if (res.status == LpStatus::Optimal) {
            j["value"] = format_rational(res.value);
            j["assignment"] = assignment_to_json(inst, res.assignment);
            j["loads"] = loads_json(inst, res.assignment);
        }
        emit(j, out_path);
        return res.status == LpStatus::Optimal ? 0 : 1;
    }

    if (equalize->parsed()) {
        auto inst = load_instance(eq_in);
        Assignment x0;
        if (!eq_start.empty()) {
            x0 = parse_assignment(Json::parse(read_input(eq_start)), inst);
        } else {
            // Canonical start: the fixing recursion with all targets zero.
            int root = 0;
            for (int w = 1; w < inst.num_workers(); ++w)
                if (inst.workers[w] < inst.workers[root]) root = w;
            auto view = make_tree_view(inst, bfs_spanning_tree(inst, root), root);
            if (inst.all_linear()) {
                std::vector<Rat> pinned(inst.num_edges(), Rat(0));
                std::vector<Rat> targets(inst.num_workers(), Rat(0));
                x0 = Assignment::rational(fix_loads_exact(view, pinned, targets));
            } else {
                std::vector<double> pinned(inst.num_edges(), 0.0);
                std::vector<double> targets(inst.num_workers(), 0.0);
                x0 = Assignment::floating(fix_loads(view, pinned, targets));
            }
        }
        std::vector<int> given_tree;
        if (eq_tree == "given") {
            std::map<std::string, int> keys;
            for (int e = 0; e < inst.num_edges(); ++e) keys[inst.edge_key(e)] = e;
            std::stringstream ss(eq_tree_edges);
            std::string item;
            while (std::getline(ss, item, ',')) {
                if (!keys.count(item)) throw ParseError("unknown tree edge '" + item + "'");
                given_tree.push_back(keys[item]);
            }
        }
        auto out = equalize_connected(inst, x0,
                                      eq_tree == "given" ? TreePolicy::Given : TreePolicy::Bfs,
                                      given_tree, eq_tol);
        Json j;
        j["lambda"] = out.exact ? Json(format_rational(out.lambda_exact)) : Json(out.lambda);
        j["improved"] = out.improved;
        j["exact"] = out.exact;
        j["negative_components"] = out.negative_components;
        j["assignment"] = assignment_to_json(inst, out.x);
        j["loads"] = loads_json(inst, out.x);
        j["tree_edges"] = Json::array();
        for (int e : out.tree_edges) j["tree_edges"].push_back(inst.edge_key(e));
        emit(j, out_path);
        return 0;
    }

    if (enumerate->parsed()) {
        auto inst = load_instance(en_in);
        EnumOptions opt;
        opt.count_cap = en_cap;
        if (en_dump) {
            for_each_integral(inst, opt, [&](const std::vector<long long>& x) {
                Json values = Json::object();
                for (int e = 0; e < inst.num_edges(); ++e) values[inst.edge_key(e)] = x[e];
                std::cout << Json{{"values", values}}.dump() << "\n";
            });
        }
        auto s = enumerate_integral(inst, opt);
        Json j;
        j["count"] = s.count;
        if (s.count > 0) {
            j["min_lmax"] = format_rational(s.min_lmax);
            j["max_lmin"] = format_rational(s.max_lmin);
            j["min_spread"] = format_rational(s.min_spread);
            j["min_spread_witness"] = s.min_spread_witness;
            j["min_spread_among_lmax_argmins"] = format_rational(s.min_spread_among_lmax_argmins);
            j["lmax_argmin_count"] = s.lmax_argmins.size();
            j["lmax_argmins_truncated"] = s.argmins_truncated;
            j["lmax_argmins"] = s.lmax_argmins;
            if (en_pareto) {
                j["pareto"] = Json::array();
                for (const auto& [lmax, lmin] : s.pareto)
                    j["pareto"].push_back(
                        {{"lmax", format_rational(lmax)}, {"lmin", format_rational(lmin)}});
            }
        }
        emit(j, out_path);
        return 0;
    }

    if (verify->parsed()) {
        auto [lo, hi] = parse_seed_range(seeds);
        GenParams base = vp;
        if (theorem == "prop1") {
            base.unit_weights = true;
            if (verify_workers < 0) verify_workers = 4;
        } else if (theorem == "thm1") {
            if (verify_workers < 0) verify_workers = 4;
        } else if (theorem == "thm2") {
            base.mode = Mode::GeneralReal;
            base.demand_min = -5;
            base.demand_max = 5;
            if (verify_workers < 0) verify_workers = 3;
        } else {
            throw CLI::ValidationError("--theorem", "unknown theorem '" + theorem + "'");
        }
        base.num_workers = verify_workers;

        Json arr = Json::array();
        int confirmed = 0, voided = 0, violated = 0;
        for (std::uint64_t seed = lo; seed <= hi; ++seed) {
            base.seed = seed;
            auto inst = gen_random_instance(base);
            TheoremReport rep;
            if (theorem == "prop1")
                rep = check_prop1(inst);
            else if (theorem == "thm1")
                rep = check_theorem1(inst);
            else
                rep = check_theorem2(inst, random_xf_point(inst, seed ^ 0xD1B54A32D192ED03ULL));
            Json jr = theorem_report_to_json(rep);
            jr["seed"] = seed;
            arr.push_back(jr);
            if (rep.verdict == Verdict::Confirmed) ++confirmed;
            if (rep.verdict == Verdict::HypothesisVoid) ++voided;
            if (rep.verdict == Verdict::Violated) ++violated;
        }
        emit(arr, out_path);
        std::cout << theorem << ": " << (hi - lo + 1) << " seeds, " << confirmed
                  << " CONFIRMED, " << voided << " HYPOTHESIS_VOID, " << violated
                  << " VIOLATED\n";
        return violated > 0 ? 1 : 0;
    }

    if (gen->parsed()) {
        gp.mode = gen_mode == "GENERAL_REAL" ? Mode::GeneralReal : Mode::LinearNonneg;
        if (gp.mode == Mode::GeneralReal && gp.demand_min == 0) gp.demand_min = -5;
        emit(instance_to_json(gen_random_instance(gp)), out_path);
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

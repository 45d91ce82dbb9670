#include "fairload/json_io.hpp"

#include <map>

namespace fairload {

namespace {

Rat get_rational(const Json& j, const std::string& what) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(what + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Rat(j.get<long long>());
    throw ParseError(what + ": expected a rational string");
}

std::map<std::string, int> edge_key_map(const BipartiteInstance& inst) {
    std::map<std::string, int> m;
    for (int e = 0; e < inst.num_edges(); ++e) m[inst.edge_key(e)] = e;
    return m;
}

LoadExpr parse_expr_impl(const Json& j, const std::map<std::string, int>& keys) {
    if (!j.is_object() || !j.contains("op"))
        throw ParseError("expression node must be an object with an \"op\" field");
    std::string op = j.at("op").get<std::string>();
    if (op == "var") {
        std::string key = j.at("edge").get<std::string>();
        auto it = keys.find(key);
        if (it == keys.end()) throw ParseError("unknown edge '" + key + "' in expression");
        Rat coeff = j.contains("coeff") ? get_rational(j.at("coeff"), "coeff") : Rat(1);
        return LoadExpr::var(it->second, coeff);
    }
    if (op == "sum" || op == "max") {
        if (!j.contains("children") || !j.at("children").is_array() || j.at("children").empty())
            throw ParseError(op + " node needs a non-empty \"children\" array");
        std::vector<LoadExpr> children;
        for (const auto& c : j.at("children")) children.push_back(parse_expr_impl(c, keys));
        return op == "sum" ? LoadExpr::sum(std::move(children))
                           : LoadExpr::max_of(std::move(children));
    }
    if (op == "oddpow") {
        if (!j.contains("child")) throw ParseError("oddpow node needs a \"child\"");
        int exp = j.at("exp").get<int>();
        return LoadExpr::odd_pow(parse_expr_impl(j.at("child"), keys), exp);
    }
    if (op == "shift") {
        if (!j.contains("child")) throw ParseError("shift node needs a \"child\"");
        return LoadExpr::shift(parse_expr_impl(j.at("child"), keys),
                               get_rational(j.at("offset"), "offset"));
    }
    throw ParseError("unknown expression op '" + op + "'");
}

}  // namespace

BipartiteInstance parse_instance(const Json& j) {
    if (!j.is_object()) throw ParseError("instance must be a JSON object");
    BipartiteInstance inst;

    std::string mode = j.value("mode", std::string("LINEAR_NONNEG"));
    if (mode == "LINEAR_NONNEG")
        inst.mode = Mode::LinearNonneg;
    else if (mode == "GENERAL_REAL")
        inst.mode = Mode::GeneralReal;
    else
        throw ParseError("unknown mode '" + mode + "'");

    if (!j.contains("tasks") || !j.at("tasks").is_array())
        throw ParseError("instance needs a \"tasks\" array");
    for (const auto& t : j.at("tasks")) {
        inst.tasks.push_back(t.at("id").get<std::string>());
        inst.demands.push_back(get_rational(t.at("demand"), "demand of " + inst.tasks.back()));
    }
    if (!j.contains("workers") || !j.at("workers").is_array())
        throw ParseError("instance needs a \"workers\" array");
    for (const auto& w : j.at("workers")) inst.workers.push_back(w.get<std::string>());

    BipartiteInstance probe = inst;  // id maps only
    probe.finalize();

    for (const auto& e : j.value("edges", Json::array())) {
        std::string tid = e.at("task").get<std::string>();
        std::string wid = e.at("worker").get<std::string>();
        int u = probe.task_index(tid), w = probe.worker_index(wid);
        if (u < 0) throw ParseError("edge references unknown task '" + tid + "'");
        if (w < 0) throw ParseError("edge references unknown worker '" + wid + "'");
        inst.edges.emplace_back(u, w);
        inst.task_weight.push_back(
            e.contains("weight_task") ? get_rational(e.at("weight_task"), "weight_task") : Rat(1));
        inst.worker_weight.push_back(e.contains("weight_worker")
                                         ? get_rational(e.at("weight_worker"), "weight_worker")
                                         : Rat(1));
    }

    inst.worker_func_override.resize(inst.workers.size());
    inst.finalize();

    if (j.contains("worker_funcs")) {
        auto keys = edge_key_map(inst);
        for (const auto& [wid, expr] : j.at("worker_funcs").items()) {
            int w = inst.worker_index(wid);
            if (w < 0) throw ParseError("worker_funcs references unknown worker '" + wid + "'");
            inst.worker_func_override[w] = parse_expr_impl(expr, keys);
        }
        inst.finalize();
    }
    return inst;
}

BipartiteInstance parse_instance_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
    return parse_instance(j);
}

Json instance_to_json(const BipartiteInstance& inst) {
    Json j;
    j["mode"] = inst.mode == Mode::LinearNonneg ? "LINEAR_NONNEG" : "GENERAL_REAL";
    j["tasks"] = Json::array();
    for (int u = 0; u < inst.num_tasks(); ++u)
        j["tasks"].push_back({{"id", inst.tasks[u]}, {"demand", format_rational(inst.demands[u])}});
    j["workers"] = inst.workers;
    j["edges"] = Json::array();
    for (int e = 0; e < inst.num_edges(); ++e) {
        Json je;
        je["task"] = inst.tasks[inst.edges[e].first];
        je["worker"] = inst.workers[inst.edges[e].second];
        if (inst.task_weight[e] != 1) je["weight_task"] = format_rational(inst.task_weight[e]);
        if (inst.worker_weight[e] != 1)
            je["weight_worker"] = format_rational(inst.worker_weight[e]);
        j["edges"].push_back(je);
    }
    bool any_override = false;
    for (const auto& f : inst.worker_func_override) any_override |= f.has_value();
    if (any_override) {
        Json funcs = Json::object();
        for (int w = 0; w < inst.num_workers(); ++w)
            if (inst.worker_func_override[w])
                funcs[inst.workers[w]] = expr_to_json(inst, *inst.worker_func_override[w]);
        j["worker_funcs"] = funcs;
    }
    return j;
}

Assignment parse_assignment(const Json& j, const BipartiteInstance& inst) {
    if (!j.is_object() || !j.contains("values"))
        throw ParseError("assignment needs a \"values\" object");
    auto keys = edge_key_map(inst);
    std::vector<Rat> rats(inst.num_edges(), Rat(0));
    std::vector<double> dbls(inst.num_edges(), 0.0);
    std::vector<bool> seen(inst.num_edges(), false);
    bool any_float = false;
    for (const auto& [key, val] : j.at("values").items()) {
        auto it = keys.find(key);
        if (it == keys.end()) throw ParseError("assignment key '" + key + "' is not an edge");
        int e = it->second;
        seen[e] = true;
        if (val.is_number()) {
            dbls[e] = val.get<double>();
            any_float = true;
        } else if (val.is_string()) {
            std::string s = val.get<std::string>();
            if (s.find_first_of(".eE") != std::string::npos && s.find('/') == std::string::npos) {
                dbls[e] = std::stod(s);
                any_float = true;
            } else {
                rats[e] = parse_rational(s);
                dbls[e] = to_double(rats[e]);
            }
        } else {
            throw ParseError("assignment value for '" + key + "' must be a string");
        }
    }
    for (int e = 0; e < inst.num_edges(); ++e)
        if (!seen[e]) throw ParseError("assignment is missing edge '" + inst.edge_key(e) + "'");
    return any_float ? Assignment::floating(std::move(dbls)) : Assignment::rational(std::move(rats));
}

Json assignment_to_json(const BipartiteInstance& inst, const Assignment& x) {
    Json values = Json::object();
    for (int e = 0; e < inst.num_edges(); ++e) {
        if (x.kind == NumericKind::Rational)
            values[inst.edge_key(e)] = format_rational(x.rat[e]);
        else
            values[inst.edge_key(e)] = x.dbl[e];
    }
    return Json{{"values", values}};
}

LoadExpr parse_expr(const Json& j, const BipartiteInstance& inst) {
    return parse_expr_impl(j, edge_key_map(inst));
}

Json expr_to_json(const BipartiteInstance& inst, const LoadExpr& e) {
    switch (e.kind) {
        case ExprKind::Var:
            return Json{{"op", "var"},
                        {"edge", inst.edge_key(e.edge)},
                        {"coeff", format_rational(e.coeff)}};
        case ExprKind::Sum:
        case ExprKind::Max: {
            Json children = Json::array();
            for (const auto& c : e.children) children.push_back(expr_to_json(inst, c));
            return Json{{"op", e.kind == ExprKind::Sum ? "sum" : "max"}, {"children", children}};
        }
        case ExprKind::OddPow:
            return Json{{"op", "oddpow"},
                        {"child", expr_to_json(inst, e.children.front())},
                        {"exp", e.exponent}};
        case ExprKind::Shift:
            return Json{{"op", "shift"},
                        {"child", expr_to_json(inst, e.children.front())},
                        {"offset", format_rational(e.offset)}};
    }
    throw std::logic_error("unreachable expression kind");
}

}  // namespace fairload

#ifndef FAIRLOAD_JSON_IO_HPP
#define FAIRLOAD_JSON_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "fairload/instance.hpp"

namespace fairload {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance format: {"mode", "tasks": [{"id","demand"}], "workers": [...],
// "edges": [{"task","worker","weight_task"?,"weight_worker"?}],
// "worker_funcs"?: {"id": expr}}. Rationals travel as strings "p/q".
BipartiteInstance parse_instance(const Json& j);
BipartiteInstance parse_instance_text(const std::string& text);
Json instance_to_json(const BipartiteInstance& inst);

// {"values": {"task:worker": "p/q" or decimal string}}
Assignment parse_assignment(const Json& j, const BipartiteInstance& inst);
Json assignment_to_json(const BipartiteInstance& inst, const Assignment& x);

LoadExpr parse_expr(const Json& j, const BipartiteInstance& inst);
Json expr_to_json(const BipartiteInstance& inst, const LoadExpr& e);

}  // namespace fairload

#endif

#pragma once

// JSON file formats for coefficient vectors, operators and reports.
//
// Vector:   {"space": "shift"|"fourier"|"dense"|"sum", "multiplicity"?, "dimension"?,
//            "base"?, "parts"?, "entries": [{"index": ..., "part"?, "re", "im"}]}
// Operator: {"kind": "shift"|"doubling"|"matrix"|"weighted_shift"|"diag_unitary"|"direct_sum",
//            ...kind-specific fields}
//
// Reports are written with sorted keys and 17 significant digits so equal
// inputs give byte-identical output.

#include <optional>
#include <string>

#include <json.hpp>

#include "coblab/core.hpp"
#include "coblab/dyadic.hpp"
#include "coblab/operators.hpp"
#include "coblab/solver.hpp"
#include "coblab/wold.hpp"

namespace coblab {

using json = nlohmann::json;

/// Parses text, reporting "<source>:<line>:<column>: <message>" on failure.
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);

/// Deterministic serialization (sorted keys, %.17g floats, non-finite -> null).
std::string dump_json(const json& j, int indent = 2);

json space_to_json(const Space& space);
Space space_from_json(const json& j);

json vector_to_json(const CoeffVector& v);
/// `fallback_base` is used for Fourier vectors that carry no "base" field.
CoeffVector vector_from_json(const json& j, int fallback_base = 2);

json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const json& j, double zero_eps = kZeroEps);

json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json condition_report_to_json(const ConditionReport& r);
json solve_result_to_json(const SolveResult<CoeffVector>& r);
json wold_split_to_json(const WoldSplit<CoeffVector>& split);
json chain_verdict_to_json(const ChainVerdict& v);

}  // namespace coblab

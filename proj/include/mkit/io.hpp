#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "mkit/core.hpp"
#include "mkit/rep.hpp"
#include "mkit/su1d.hpp"
#include "mkit/verify.hpp"

namespace mkit {

using json = nlohmann::json;

/// [re, im]
json complex_to_json(Complex z);
/// Throws std::invalid_argument unless j is a two-number array.
Complex complex_from_json(const json& j);

/// {"d": d, "a": [re, im], "b": [...], "c": [...], "D": [[...], ...]} with D row-major.
json group_to_json(const GroupElement& g);
/// Shape errors throw std::invalid_argument; membership is not checked here.
GroupElement group_from_json(const json& j);

GroupElement read_group_file(const std::string& path);
void write_group_file(const GroupElement& g, const std::string& path);

/// {"d", "sigma", "truncation", "basis": ["0,0", ...], "entries": [[m, n, re, im], ...]}
/// with zero entries omitted.
json operator_matrix_to_json(const OperatorMatrix& op);
OperatorMatrix operator_matrix_from_json(const json& j);

/// "m;n;re;im" rows in graded-lex order of (n, m), zero entries included.
void write_operator_csv(std::ostream& out, const OperatorMatrix& op);

/// Omits wall_time_ms unless include_timing.
json report_to_json(const CheckReport& report, bool include_timing = false);
CheckReport report_from_json(const json& j);

/// %.15g, the CLI's display precision
std::string format_value(double x);

} // namespace mkit

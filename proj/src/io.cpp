#include "mkit/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace mkit {

json complex_to_json(Complex z)
{
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("expected a complex number as [re, im], got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

json vector_to_json(const ComplexVector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(complex_to_json(v(i)));
    return out;
}

ComplexVector vector_from_json(const json& j, std::size_t d, const char* name)
{
    if (!j.is_array() || j.size() != d)
        throw std::invalid_argument(std::string("group element: '") + name + "' must hold d complex entries");
    ComplexVector v(static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
    return v;
}

const json& require_field(const json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
        throw std::invalid_argument(std::string("missing field '") + name + "'");
    return j.at(name);
}

} // namespace

json group_to_json(const GroupElement& g)
{
    const ComplexMatrix D = g.D();
    json rows = json::array();
    for (Eigen::Index i = 0; i < D.rows(); ++i)
        rows.push_back(vector_to_json(D.row(i).transpose()));
    return json{{"d", g.dim()},
                {"a", complex_to_json(g.a())},
                {"b", vector_to_json(g.b())},
                {"c", vector_to_json(g.c())},
                {"D", rows}};
}

GroupElement group_from_json(const json& j)
{
    const json& dj = require_field(j, "d");
    if (!dj.is_number_integer() || dj.get<long long>() < 1)
        throw std::invalid_argument("group element: 'd' must be a positive integer");
    const auto d = dj.get<std::size_t>();
    const Complex a = complex_from_json(require_field(j, "a"));
    const ComplexVector b = vector_from_json(require_field(j, "b"), d, "b");
    const ComplexVector c = vector_from_json(require_field(j, "c"), d, "c");
    const json& rows = require_field(j, "D");
    if (!rows.is_array() || rows.size() != d)
        throw std::invalid_argument("group element: 'D' must have d rows");
    ComplexMatrix D(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < d; ++i)
        D.row(static_cast<Eigen::Index>(i)) = vector_from_json(rows[i], d, "D").transpose();
    return GroupElement::from_blocks(a, b, c, D);
}

GroupElement read_group_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open group file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return group_from_json(j);
}

void write_group_file(const GroupElement& g, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    out << group_to_json(g).dump(2) << '\n';
}

json operator_matrix_to_json(const OperatorMatrix& op)
{
    json basis = json::array();
    for (const MultiIndex& m : op.basis())
        basis.push_back(to_string(m));
    json entries = json::array();
    const ComplexMatrix& V = op.values();
    for (Eigen::Index col = 0; col < V.cols(); ++col) {
        for (Eigen::Index row = 0; row < V.rows(); ++row) {
            if (V(row, col) != Complex(0.0))
                entries.push_back(json::array({row, col, V(row, col).real(), V(row, col).imag()}));
        }
    }
    return json{{"d", op.dim()}, {"sigma", op.sigma()}, {"truncation", op.max_degree()}, {"basis", basis}, {"entries", entries}};
}

OperatorMatrix operator_matrix_from_json(const json& j)
{
    try {
        OperatorMatrix op(j.at("d").get<std::size_t>(), j.at("sigma").get<int>(), j.at("truncation").get<int>());
        const json& basis = j.at("basis");
        if (basis.size() != op.basis().size())
            throw std::invalid_argument("operator matrix: basis size does not match d and truncation");
        for (std::size_t r = 0; r < basis.size(); ++r) {
            if (parse_multi_index(basis[r].get<std::string>()) != op.basis()[r])
                throw std::invalid_argument("operator matrix: basis is not in graded-lex order");
        }
        const auto size = static_cast<Eigen::Index>(basis.size());
        for (const json& e : j.at("entries")) {
            const auto row = e.at(0).get<Eigen::Index>();
            const auto col = e.at(1).get<Eigen::Index>();
            if (row < 0 || col < 0 || row >= size || col >= size)
                throw std::invalid_argument("operator matrix: entry index out of range");
            op.values()(row, col) = Complex(e.at(2).get<double>(), e.at(3).get<double>());
        }
        return op;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("operator matrix: ") + e.what());
    }
}

std::string format_value(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", x == 0.0 ? 0.0 : x); // no "-0"
    return buf;
}

void write_operator_csv(std::ostream& out, const OperatorMatrix& op)
{
    out << "m;n;re;im\n";
    const ComplexMatrix& V = op.values();
    for (Eigen::Index col = 0; col < V.cols(); ++col) {
        for (Eigen::Index row = 0; row < V.rows(); ++row) {
            out << to_string(op.basis()[static_cast<std::size_t>(row)]) << ';'
                << to_string(op.basis()[static_cast<std::size_t>(col)]) << ';' << format_value(V(row, col).real()) << ';'
                << format_value(V(row, col).imag()) << '\n';
        }
    }
}

json report_to_json(const CheckReport& report, bool include_timing)
{
    json j{{"identity", report.identity},
           {"d", report.d},
           {"sigma", report.sigma},
           {"seed", report.seed},
           {"indices", report.indices},
           {"truncation", report.truncation},
           {"tail_estimate", report.tail_estimate},
           {"max_abs_residual", report.max_abs_residual},
           {"max_rel_residual", report.max_rel_residual},
           {"tolerance", report.tolerance},
           {"status", to_string(report.status)},
           {"notes", report.notes},
           {"metrics", report.metrics}};
    if (include_timing)
        j["wall_time_ms"] = report.wall_time_ms;
    return j;
}

CheckReport report_from_json(const json& j)
{
    try {
        CheckReport r;
        r.identity = j.at("identity").get<std::string>();
        r.d = j.at("d").get<std::size_t>();
        r.sigma = j.at("sigma").get<int>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.indices = j.at("indices").get<std::string>();
        r.truncation = j.at("truncation").get<int>();
        r.tail_estimate = j.at("tail_estimate").get<double>();
        r.max_abs_residual = j.at("max_abs_residual").get<double>();
        r.max_rel_residual = j.at("max_rel_residual").get<double>();
        r.tolerance = j.at("tolerance").get<double>();
        r.status = parse_check_status(j.at("status").get<std::string>());
        r.notes = j.at("notes").get<std::vector<std::string>>();
        r.metrics = j.at("metrics").get<std::map<std::string, double>>();
        if (j.contains("wall_time_ms"))
            r.wall_time_ms = j.at("wall_time_ms").get<double>();
        return r;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("check report: ") + e.what());
    }
}

} // namespace mkit

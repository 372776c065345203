// meixner-kit: evaluate, tabulate and verify multivariate Meixner polynomials
// and SU(1,d) matrix coefficients.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mkit/campaign.hpp"
#include "mkit/io.hpp"
#include "mkit/meixner.hpp"
#include "mkit/rep.hpp"
#include "mkit/su1d.hpp"
#include "mkit/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kInvalidGroup = 3, kInconclusive = 4 };

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level()
{
    const char* env = std::getenv("MEIXNER_KIT_LOG");
    if (!env)
        return LogLevel::info;
    const std::string v(env);
    if (v == "error")
        return LogLevel::error;
    if (v == "debug")
        return LogLevel::debug;
    return LogLevel::info;
}

void log(LogLevel level, const std::string& msg)
{
    static const LogLevel threshold = log_level();
    if (level <= threshold)
        std::cerr << msg << '\n';
}

struct GroupSource {
    bool identity = false;
    bool random = false;
    std::string file;
    std::size_t d = 2;
    std::uint64_t seed = 1;
    double scale = 0.3;
    std::size_t zero_b = 0;
    std::size_t zero_c = 0;

    void add_options(CLI::App* app, bool with_choice)
    {
        if (with_choice) {
            app->add_flag("--identity", identity, "use the identity element of SU(1,d)");
            app->add_flag("--random-group", random, "use a seeded random element (default)");
            app->add_option("--group-file", file, "read the element from a JSON file")->check(CLI::ExistingFile);
        }
        app->add_option("--d", d, "dimension d")->check(CLI::Range(1, 6));
        app->add_option("--seed", seed, "seed for the random element");
        app->add_option("--scale", scale, "size of the random Lie algebra element")->check(CLI::PositiveNumber);
        app->add_option("--zero-b", zero_b, "keep b_1..b_k and rotate the rest to zero (0 = no rotation)");
        app->add_option("--zero-c", zero_c, "keep c_1..c_l and rotate the rest to zero (0 = no rotation)");
    }

    mkit::GroupElement build() const
    {
        if (!file.empty())
            return mkit::read_group_file(file);
        if (identity)
            return mkit::GroupElement::identity(d);
        mkit::GroupElement g = mkit::random_element(seed, d, scale);
        if (zero_b || zero_c)
            g = mkit::rotate_to_zero_tails(g, zero_b ? zero_b : d, zero_c ? zero_c : d);
        return g;
    }

    mkit::json describe() const
    {
        if (!file.empty())
            return {{"group_file", file}};
        if (identity)
            return {{"identity", true}, {"d", d}};
        return {{"random_group", true}, {"d", d}, {"seed", seed}, {"scale", scale}, {"zero_b", zero_b}, {"zero_c", zero_c}};
    }
};

/// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::invalid_argument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
    bool is_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
};

void echo_config(const std::string& command, mkit::json config)
{
    config["command"] = command;
    log(LogLevel::info, "config: " + config.dump());
}

int cmd_eval(const GroupSource& source, int sigma, const std::string& m_text, const std::string& n_text,
             const std::string& format)
{
    const mkit::MultiIndex m = mkit::parse_multi_index(m_text);
    const mkit::MultiIndex n = mkit::parse_multi_index(n_text);
    const mkit::GroupElement g = source.build();
    if (m.dim() != g.dim() || n.dim() != g.dim())
        throw std::invalid_argument("--m and --n need d = " + std::to_string(g.dim()) + " entries");
    mkit::require_valid(g);
    mkit::json config = source.describe();
    config["sigma"] = sigma;
    config["m"] = m_text;
    config["n"] = n_text;
    echo_config("eval", config);

    const mkit::Complex value = mkit::matrix_coefficient(g, sigma, m, n);
    std::optional<mkit::Complex> poly;
    const mkit::MeixnerParams params = mkit::extract_params(g, sigma);
    if (!params.extrapolated)
        poly = mkit::meixner_value(params, m, n);
    else
        log(LogLevel::info, "b or c vanishes entirely; Meixner value not defined for this element");

    if (format == "json") {
        mkit::json out{{"m", m_text}, {"n", n_text}, {"sigma", sigma}, {"matrix_coefficient", mkit::complex_to_json(value)}};
        if (poly)
            out["meixner"] = mkit::complex_to_json(*poly);
        std::cout << out.dump() << '\n';
    } else {
        std::cout << mkit::format_value(value.real()) << ' ' << mkit::format_value(value.imag()) << '\n';
        if (poly && format == "table")
            std::cout << "meixner " << mkit::format_value(poly->real()) << ' ' << mkit::format_value(poly->imag()) << '\n';
    }
    return kOk;
}

int cmd_table(const GroupSource& source, int sigma, const std::string& m_text, const std::string& n_text,
              bool operator_export, int trunc, const std::string& format, const std::string& out_path)
{
    const mkit::GroupElement g = source.build();
    mkit::require_valid(g);
    mkit::json config = source.describe();
    config["sigma"] = sigma;
    if (operator_export) {
        config["operator"] = true;
        config["trunc"] = trunc;
        config["format"] = format;
        echo_config("table", config);
        if (trunc < 0)
            throw std::invalid_argument("--trunc must be nonnegative");
        const mkit::OperatorMatrix op = mkit::operator_matrix(g, sigma, trunc);
        Output out(out_path);
        if (format == "json")
            out.stream() << mkit::operator_matrix_to_json(op).dump() << '\n';
        else
            mkit::write_operator_csv(out.stream(), op);
        return kOk;
    }

    const mkit::MultiIndex m_box = mkit::parse_multi_index(m_text);
    const mkit::MultiIndex n_box = mkit::parse_multi_index(n_text);
    if (m_box.dim() != g.dim() || n_box.dim() != g.dim())
        throw std::invalid_argument("--m and --n need d = " + std::to_string(g.dim()) + " entries");
    config["m"] = m_text;
    config["n"] = n_text;
    echo_config("table", config);
    const mkit::MeixnerParams params = mkit::extract_params(g, sigma);
    if (params.extrapolated)
        throw std::invalid_argument("table: the element needs at least one nonzero entry in b and in c");
    Output out(out_path);
    out.stream() << "m;n;re;im\n";
    for (const mkit::MultiIndex& m : mkit::indices_in_box(m_box)) {
        for (const mkit::MultiIndex& n : mkit::indices_in_box(n_box)) {
            const mkit::Complex v = mkit::meixner_value(params, m, n);
            out.stream() << mkit::to_string(m) << ';' << mkit::to_string(n) << ';' << mkit::format_value(v.real()) << ';'
                         << mkit::format_value(v.imag()) << '\n';
        }
    }
    return kOk;
}

int cmd_group(const GroupSource& source, const std::string& out_path)
{
    echo_config("group", source.describe());
    const mkit::GroupElement g = source.build();
    mkit::require_valid(g);
    Output out(out_path);
    out.stream() << mkit::group_to_json(g).dump(2) << '\n';
    return kOk;
}

int cmd_verify(const std::string& config_path, const std::string& out_path, std::optional<double> tol, unsigned jobs,
               bool timing)
{
    std::vector<mkit::CampaignEntry> entries;
    if (config_path.empty()) {
        entries = mkit::default_campaign();
    } else {
        std::ifstream in(config_path);
        if (!in)
            throw std::invalid_argument("cannot open campaign file '" + config_path + "'");
        mkit::json j;
        try {
            in >> j;
        } catch (const mkit::json::parse_error& e) {
            throw std::invalid_argument(std::string("malformed campaign JSON: ") + e.what());
        }
        entries = mkit::parse_campaign(j);
    }
    if (tol) {
        for (auto& e : entries)
            e.tol = *tol;
    }
    echo_config("verify", {{"campaign", mkit::campaign_to_json(entries)}, {"jobs", jobs}});

    const auto reports = mkit::run_campaign(entries, jobs);
    Output out(out_path);
    for (const auto& r : reports) {
        out.stream() << mkit::report_to_json(r, timing).dump() << '\n';
        if (r.status != mkit::CheckStatus::pass) {
            log(LogLevel::error, to_string(r.status) + ": " + r.identity + " d=" + std::to_string(r.d) + " sigma="
                                     + std::to_string(r.sigma) + " seed=" + std::to_string(r.seed) + " " + r.indices);
        }
        log(LogLevel::debug, mkit::report_to_json(r, true).dump());
    }
    const std::string table = mkit::summary_table(reports, timing);
    if (out.is_file())
        std::cout << table;
    else
        std::cerr << table;
    return mkit::campaign_exit_code(reports);
}

const char* kVerifyHelp = R"(Runs a campaign of identity checks and writes one JSON report per line.

Checks (the "check" field of a campaign entry):
  orthogonality        both orthogonality relations of the Meixner polynomials for
                       the negative multinomial weight, plus the total mass identity
  duality              M_m(n; U, sigma) = M_n(m; U^t, sigma), degenerate (k,l) -> (l,k)
  sum_identity         composition law pi(g1 g2) = pi(g1) pi(g2) written for M
  tensor_identity      convolution identity from the tensor product intertwiner
                       (the two-factor case is the Runge-type identity)
  difference_equation  difference equations in n from the Cartan elements H_k
  raising_lowering     lowering/raising relations from E_{k,l}, including k = 0 or l = 0
  degenerate_limit     matrix coefficients converge as entries of b, c tend to zero
  unitarity            orthonormal columns of the truncated operator matrix
  dual_path            Gelfand-Aomoto sum against the generating function
  representation       closed-form matrix coefficients against the Taylor expansion of pi(g)
  classical_reduction  d = 1 values against the Gauss 2F1
  lie_layer            conjugated generators g X g^{-1} in closed form, star compatibility
  integral             Monte-Carlo integral over the unit ball against the closed form

Entry fields: check, d, sigma, seed, indices, tol (optional), scale, zero_b, zero_c,
samples (integral), trunc and safe (unitarity), shell_cap (orthogonality).
Exit codes: 0 all pass, 1 a check failed, 2 usage error, 3 invalid group element,
4 inconclusive (truncation cap reached).)";

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Multivariate Meixner polynomials and SU(1,d) matrix coefficients"};
    app.require_subcommand(1);
    app.footer("Environment: MEIXNER_KIT_LOG=error|info|debug (default info). Exit codes: 0 ok, 1 check failure, "
               "2 usage or malformed input, 3 invalid group element, 4 inconclusive.");

    GroupSource eval_source, table_source, group_source;
    int sigma = 3;
    std::string m_text = "0", n_text = "0";
    std::string format = "plain";
    std::string out_path;

    auto* eval = app.add_subcommand("eval", "Evaluate pi_{m,n}(g) (first line: re im) and M_m(n; U, sigma).");
    eval->description("Evaluate the matrix coefficient pi_{m,n}(g) of the holomorphic discrete series, which equals a "
                      "normalized multivariate Meixner polynomial; degenerate elements use the pinned sum M^.");
    eval_source.add_options(eval, true);
    eval->add_option("--sigma", sigma, "representation label sigma >= d+1")->required();
    eval->add_option("--m", m_text, "row index, e.g. 1,0")->required();
    eval->add_option("--n", n_text, "column index, e.g. 0,2")->required();
    eval->add_option("--format", format, "plain | table | json")->check(CLI::IsMember({"plain", "table", "json"}));

    bool operator_export = false;
    int trunc = 4;
    std::string table_format = "csv";
    std::string table_out;
    std::string table_m = "0", table_n = "0";
    int table_sigma = 3;
    auto* table = app.add_subcommand("table", "Tabulate M_m(n) over an index box as m;n;re;im CSV.");
    table->description("Tabulate M_m(n; U, sigma) for all m <= --m and n <= --n (entrywise), in graded-lex order. "
                       "With --operator, export the truncated operator matrix of pi(g) (Taylor expansion) instead.");
    table_source.add_options(table, true);
    table->add_option("--sigma", table_sigma, "representation label")->required();
    table->add_option("--m", table_m, "upper corner of the m box");
    table->add_option("--n", table_n, "upper corner of the n box");
    table->add_flag("--operator", operator_export, "export operator_matrix(g, sigma, --trunc)");
    table->add_option("--trunc", trunc, "truncation degree for --operator");
    table->add_option("--format", table_format, "csv | json (json only with --operator)")
        ->check(CLI::IsMember({"csv", "json"}));
    table->add_option("--out", table_out, "output file (default stdout)");

    std::string group_out;
    auto* group = app.add_subcommand("group", "Generate a seeded SU(1,d) element as JSON.");
    group->description("Generate exp(X) for a seeded random Lie algebra element X, optionally rotated so that trailing "
                       "entries of b and c vanish, and write it as JSON.");
    group_source.add_options(group, false);
    group->add_option("--out", group_out, "output file (default stdout)");

    std::string config_path, verify_out;
    std::optional<double> tol;
    unsigned jobs = 1;
    bool timing = false;
    auto* verify = app.add_subcommand("verify", "Run identity checks; JSON lines of reports.");
    verify->description(kVerifyHelp);
    verify->add_option("--config", config_path, "campaign JSON (default: built-in campaign)");
    verify->add_option("--out", verify_out, "JSON-lines report file (default stdout)");
    verify->add_option("--tol", tol, "override every entry's tolerance");
    verify->add_option("--jobs", jobs, "worker threads; output order does not depend on it")->check(CLI::Range(1u, 256u));
    verify->add_flag("--timing", timing, "include wall times (breaks byte-identical reruns)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*eval) {
            if (eval_source.identity + eval_source.random + !eval_source.file.empty() > 1)
                throw std::invalid_argument("choose one of --identity, --random-group, --group-file");
            return cmd_eval(eval_source, sigma, m_text, n_text, format);
        }
        if (*table) {
            if (table_format == "json" && !operator_export)
                throw std::invalid_argument("--format json needs --operator");
            return cmd_table(table_source, table_sigma, table_m, table_n, operator_export, trunc, table_format, table_out);
        }
        if (*group)
            return cmd_group(group_source, group_out);
        if (*verify)
            return cmd_verify(config_path, verify_out, tol, jobs, timing);
    } catch (const mkit::InvalidGroupElement& e) {
        log(LogLevel::error, std::string("invalid group element: ") + e.what());
        return kInvalidGroup;
    } catch (const std::invalid_argument& e) {
        log(LogLevel::error, std::string("error: ") + e.what());
        return kUsage;
    } catch (const std::domain_error& e) {
        log(LogLevel::error, std::string("error: ") + e.what());
        return kUsage;
    } catch (const std::exception& e) {
        log(LogLevel::error, std::string("internal error: ") + e.what());
        return kCheckFailed;
    }
    return kUsage;
}

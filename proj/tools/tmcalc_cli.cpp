#include "tmcalc/dsl.hpp"
#include "tmcalc/error.hpp"
#include "tmcalc/lifts.hpp"
#include "tmcalc/operators.hpp"
#include "tmcalc/render.hpp"
#include "tmcalc/suite.hpp"
#include "tmcalc/transitions.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <iterator>

using namespace tmcalc;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

struct Common {
    int m = 0;
    std::string format = "text";

    std::optional<int> dim() const { return m ? std::optional<int>(m) : std::nullopt; }
};

std::string read_input(const std::string& arg) {
    if (arg != "-") return arg;
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
}

/// Splits "a, b, c" at top-level commas.
std::vector<std::string> split_components(const std::string& text) {
    std::vector<std::string> out(1);
    int depth = 0;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) out.emplace_back();
        else out.back() += c;
    }
    return out;
}

std::vector<ScalarExpr> parse_map(const std::string& text, int m) {
    std::vector<ScalarExpr> out;
    for (const auto& piece : split_components(text)) {
        const Value v = evaluate(piece, m);
        const auto* f = std::get_if<Form<ScalarExpr>>(&v);
        if (!f || f->degree() != 0) throw Error(ErrorKind::TypeMismatch, "map components must be scalars: " + piece);
        out.push_back(f->value());
    }
    if (static_cast<int>(out.size()) != m)
        throw Error(ErrorKind::ArityMismatch, "expected " + std::to_string(m) + " components, got " +
                                                  std::to_string(out.size()));
    return out;
}

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            const int m = std::stoi(text);
            return {m, m};
        }
        return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidArgument, "bad dimension range '" + text + "' (use n or lo..hi)");
    }
}

int transition_check(const std::string& forward_text, const std::string& inverse_text, int m,
                     const std::vector<std::string>& lifts, const std::string& object_text, bool as_json) {
    const ChartTransition T(parse_map(forward_text, m), parse_map(inverse_text, m));
    BaseObject object;
    if (!object_text.empty()) {
        const Value v = evaluate(object_text, m);
        if (std::holds_alternative<VectorField<ScalarExpr>>(v)) object = as_base_field(v);
        else object = as_base_form(v);
    }
    nlohmann::json checks = nlohmann::json::array();
    bool all = true;
    const auto record = [&](const std::string& name, bool ok, const std::string& detail = {}) {
        all = all && ok;
        nlohmann::json j{{"check", name}, {"passed", ok}};
        if (!detail.empty()) j["detail"] = detail;
        checks.push_back(j);
    };
    record("consistency", check_consistency_identity(T));
    record("tangent-composition", check_tangent_composition(T, T.inverted()));
    const Expr det = jacobian_determinant(T);
    record("volume-factor", volume_factor(T) == det * det, render(volume_factor(T), Format::Text));
    record("flat-dv-rule", dv_rule_is_flat(T) == T.is_affine(), T.is_affine() ? "affine" : "not affine");
    const bool has_field = std::holds_alternative<BaseVectorField<Expr>>(object);
    const bool has_form = std::holds_alternative<BaseForm<Expr>>(object);
    for (const auto& name : lifts) {
        const LiftKind kind = parse_lift_kind(name);
        // lifts that do not apply to the given object fall back to x1*px1 or x1*dx1
        BaseObject used = object;
        if (kind == LiftKind::Vertical && !has_field) used = as_base_field(evaluate("x1*px1", m));
        if ((kind == LiftKind::Pullback && !has_form) || (kind == LiftKind::Complete && !has_form && !has_field))
            used = as_base_form(evaluate("x1*dx1", m));
        record("naturality:" + name, check_naturality(kind, used, T));
    }
    if (as_json) {
        std::cout << nlohmann::json{{"checks", checks}, {"passed", all}}.dump(2) << "\n";
    } else {
        for (const auto& c : checks) {
            std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["check"].get<std::string>();
            if (c.contains("detail")) std::cout << "  " << c["detail"].get<std::string>();
            std::cout << "\n";
        }
    }
    return all ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symbolic calculus on tangent bundles"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--m", common.m, "Chart dimension when the input has no 'm = n' statement")
        ->check(CLI::Range(1, kMaxDim));
    app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "latex", "json"}));

    std::string expr, along, kind;
    auto* eval = app.add_subcommand("eval", "Evaluate a DSL document and print the result");
    eval->add_option("expr", expr, "Expression or document; '-' reads stdin")->required();

    auto* lift = app.add_subcommand("lift", "Lift a base object to TM");
    lift->add_option("kind", kind, "pullback, vertical, complete, xi or B")->required();
    lift->add_option("expr", expr, "Base form or field; '-' reads stdin");

    auto* d = app.add_subcommand("d", "Exterior derivative");
    d->add_option("expr", expr, "Form; '-' reads stdin")->required();
    auto* db_cmd = app.add_subcommand("db", "The derivation d_B");
    db_cmd->add_option("expr", expr, "Form; '-' reads stdin")->required();

    auto* lie = app.add_subcommand("lie", "Lie derivative along a field or vector-valued form");
    lie->add_option("along", along, "Vector field or vector-valued form")->required();
    lie->add_option("expr", expr, "Form, field or vector-valued form; '-' reads stdin")->required();

    SuiteConfig config;
    std::string range = "1..3";
    bool as_json = false;
    auto* verify = app.add_subcommand("verify", "Run the identity suite");
    verify->add_option("--seed", config.seed, "Random seed");
    verify->add_option("--cases", config.cases, "Cases per identity and dimension")->check(CLI::NonNegativeNumber);
    verify->add_option("--filter", config.filter, "Only identities whose id contains this text");
    verify->add_option("--dims", range, "Dimension range, n or lo..hi");
    verify->add_flag("--numeric", config.numeric, "Compare by central differences at random points");
    verify->add_flag("--json", as_json, "Print the JSON report");
    verify->add_flag("--list", [&](std::int64_t) {
        for (const auto& info : suite_registry()) std::cout << info.id << "  [" << info.module << "]\n";
        std::exit(kPass);
    }, "List identity ids and exit");

    std::string forward, inverse, object;
    std::vector<std::string> lift_kinds{"pullback", "vertical", "complete", "xi", "B"};
    auto* tcheck = app.add_subcommand("transition-check", "Check a chart change and the naturality of the lifts");
    tcheck->add_option("--forward", forward, "x' as comma-separated expressions in x1..xm")->required();
    tcheck->add_option("--inverse", inverse, "x as comma-separated expressions in x1..xm")->required();
    tcheck->add_option("--lift", lift_kinds, "Lift kinds to check (default: all)");
    tcheck->add_option("--object", object, "Base form or field to lift");
    tcheck->add_flag("--json", as_json, "Print a JSON report");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    try {
        const Format format = parse_format(common.format);
        const auto print = [&](const Value& v) { std::cout << render(v, format) << "\n"; };
        if (*eval) {
            print(evaluate(read_input(expr), common.dim()));
        } else if (*lift) {
            std::optional<Value> input;
            if (!expr.empty()) input = evaluate(read_input(expr), common.dim());
            print(apply_lift(kind, input, common.dim()));
        } else if (*d) {
            print(apply_d(evaluate(read_input(expr), common.dim())));
        } else if (*db_cmd) {
            print(apply_db(evaluate(read_input(expr), common.dim())));
        } else if (*lie) {
            const DslDocument doc = parse(read_input(expr), common.dim());
            if (!doc.result) throw Error(ErrorKind::SyntaxError, "no expression to evaluate");
            print(apply_lie(evaluate(along, doc.m), *doc.result));
        } else if (*verify) {
            std::tie(config.m_min, config.m_max) = parse_range(range);
            if (common.m && verify->count("--dims") == 0) config.m_min = config.m_max = common.m;
            const SuiteReport report = run_suite(config);
            std::cout << (as_json ? report.to_json() + "\n" : report.to_text());
            return report.all_passed() ? kPass : kFail;
        } else if (*tcheck) {
            if (!common.m) common.m = static_cast<int>(split_components(forward).size());
            return transition_check(forward, inverse, common.m, lift_kinds, object, as_json);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kPass;
}

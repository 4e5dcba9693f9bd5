#pragma once

#include "tmcalc/forms.hpp"
#include "tmcalc/render.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace tmcalc {

/// A DSL value. Scalars are degree-0 forms.
using Value = std::variant<Form<ScalarExpr>, VectorField<ScalarExpr>, VVForm<ScalarExpr>>;

struct DslDocument {
    int m = 0;
    std::map<std::string, FunctionSymbol> functions;
    std::map<std::string, Value> bindings;
    std::optional<Value> result;
};

/// Statements are separated by ';' or line breaks:
///
///   m = 2
///   fun f, g : base
///   let w = (-x2*dx1 + x1*dx2)/(x1^2 + x2^2)
///   clift(w)
///
/// Undeclared one-letter names are full-dependence function symbols.
/// `default_m` applies when the text has no `m = n` statement.
DslDocument parse(std::string_view text, std::optional<int> default_m = std::nullopt);

/// The value of the last expression statement; SyntaxError when there is none.
Value evaluate(std::string_view text, std::optional<int> default_m = std::nullopt);

Form<ScalarExpr> parse_form(std::string_view text, int m);
VectorField<ScalarExpr> parse_field(std::string_view text, int m);

/// Reads a value as a base object: TypeMismatch for the wrong kind,
/// NotBaseOnly for dv/pv terms or fiber dependence.
BaseForm<ScalarExpr> as_base_form(const Value& v);
BaseVectorField<ScalarExpr> as_base_field(const Value& v);

/// Lift by kind name ("pullback", "vertical", "complete", "xi", "B"); xi and
/// B need no input, only m.
Value apply_lift(const std::string& kind, const std::optional<Value>& input, std::optional<int> m = std::nullopt);
/// L_X on forms, fields and vector-valued forms, or L_K on forms.
Value apply_lie(const Value& along, const Value& target);
Value apply_d(const Value& v);
Value apply_db(const Value& v);

std::string render(const Value& v, Format format);
/// "scalar", "form", "field" or "vvform".
std::string value_kind(const Value& v);

} // namespace tmcalc

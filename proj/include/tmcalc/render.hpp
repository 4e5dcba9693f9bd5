#pragma once

#include "tmcalc/forms.hpp"
#include "tmcalc/scalar.hpp"

#include <iosfwd>
#include <string>

namespace tmcalc {

enum class Format { Text, Latex, Json };

/// Parses "text", "latex" or "json"; throws InvalidArgument otherwise.
Format parse_format(const std::string& name);

/// "dx1^dv1" for the slots of `mask`.
std::string basis_text(int m, Mask mask);
/// "px1" / "pv2" for a frame slot.
std::string frame_text(int m, int slot);

std::string render(const ScalarExpr& e, Format format);
std::string render(const Form<ScalarExpr>& a, Format format);
std::string render(const VectorField<ScalarExpr>& X, Format format);
std::string render(const VVForm<ScalarExpr>& K, Format format);
std::string render(const BaseForm<ScalarExpr>& a, Format format);
std::string render(const BaseVectorField<ScalarExpr>& X, Format format);

std::ostream& operator<<(std::ostream& os, const Form<ScalarExpr>& a);
std::ostream& operator<<(std::ostream& os, const VectorField<ScalarExpr>& X);
std::ostream& operator<<(std::ostream& os, const VVForm<ScalarExpr>& K);
std::ostream& operator<<(std::ostream& os, const BaseForm<ScalarExpr>& a);
std::ostream& operator<<(std::ostream& os, const BaseVectorField<ScalarExpr>& X);

} // namespace tmcalc

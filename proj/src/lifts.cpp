#include "tmcalc/lifts.hpp"

namespace tmcalc {

bool is_spray(const VectorField<ScalarExpr>& S) {
    return apply(mirror_map<ScalarExpr>(S.dim()), S) == tautological_field<ScalarExpr>(S.dim());
}

std::optional<ScalarExpr> is_lambda_mirror(const VectorField<ScalarExpr>& W) {
    const int m = W.dim();
    const auto B = mirror_map<ScalarExpr>(m);
    const auto L = lie_derivative_vvform(W, B);
    // B(d/dx^1) = d/dv^1, so the candidate is read off that entry
    ScalarExpr lambda = L.value(slot_bit(0))[m];
    if (L == B.scaled(lambda)) return lambda;
    return std::nullopt;
}

} // namespace tmcalc

#include "tmcalc/render.hpp"

#include <json.hpp>

#include <algorithm>
#include <ostream>

namespace tmcalc {

namespace {

using nlohmann::json;

std::vector<Mask> sorted_masks(std::vector<Mask> masks) {
    std::sort(masks.begin(), masks.end(), [](Mask a, Mask b) { return mask_slots(a) < mask_slots(b); });
    return masks;
}

template <class Map>
std::vector<Mask> masks_of(const Map& terms) {
    std::vector<Mask> out;
    for (const auto& entry : terms) out.push_back(entry.first);
    return sorted_masks(std::move(out));
}

std::string slot_latex(int m, int slot) {
    CoordinateId c = CoordinateId::from_slot(m, slot);
    return std::string(c.is_base() ? "x" : "v") + "^{" + std::to_string(c.index) + "}";
}

std::string basis_latex(int m, Mask mask) {
    std::string out;
    for (int s : mask_slots(mask)) {
        if (!out.empty()) out += "\\wedge ";
        out += "\\mathrm{d}" + slot_latex(m, s);
    }
    return out;
}

std::string frame_latex(int m, int slot) { return "\\partial_{" + slot_latex(m, slot) + "}"; }

// coefficient times a basis symbol, in text form; an empty basis renders the scalar alone
std::string term_text(const ScalarExpr& c, const std::string& basis) {
    if (basis.empty()) return to_text(c);
    if (c == ScalarExpr(1)) return basis;
    if (c == ScalarExpr(-1)) return "-" + basis;
    if (c.is_polynomial() && !c.numerator().is_monomial()) return "(" + to_text(c) + ")*" + basis;
    return to_text(c) + "*" + basis;
}

std::string term_latex(const ScalarExpr& c, const std::string& basis) {
    if (basis.empty()) return to_latex(c);
    if (c == ScalarExpr(1)) return basis;
    if (c == ScalarExpr(-1)) return "-" + basis;
    if (c.is_polynomial() && !c.numerator().is_monomial()) return "(" + to_latex(c) + ")" + basis;
    return to_latex(c) + basis;
}

std::string join(const std::vector<std::string>& terms, bool spaced) {
    std::string out;
    for (const auto& t : terms) {
        if (out.empty()) out = t;
        else if (t.front() == '-') out += (spaced ? " - " : "-") + t.substr(1);
        else out += (spaced ? " + " : "+") + t;
    }
    return out;
}

json coefficient_json(const ScalarExpr& c) {
    json j;
    if (c.is_constant()) {
        Rational q = c.constant_value();
        j["num"] = q.get_num().get_str();
        j["den"] = q.get_den().get_str();
        j["value"] = q.get_str();
    } else {
        j["num"] = to_text(c.numerator());
        j["den"] = to_text(c.denominator());
    }
    return j;
}

json index_json(Mask mask) {
    json idx = json::array();
    for (int s : mask_slots(mask)) idx.push_back(s + 1);
    return idx;
}

std::string zero_basis(int m, int degree) {
    if (degree == 0) return "";
    if (degree > 2 * m) return "";
    return basis_text(m, base_block(degree));  // lowest slots
}

} // namespace

Format parse_format(const std::string& name) {
    if (name == "text") return Format::Text;
    if (name == "latex") return Format::Latex;
    if (name == "json") return Format::Json;
    throw Error(ErrorKind::InvalidArgument, "unknown format '" + name + "' (expected text, latex or json)");
}

std::string basis_text(int m, Mask mask) {
    std::string out;
    for (int s : mask_slots(mask)) {
        if (!out.empty()) out += "^";
        CoordinateId c = CoordinateId::from_slot(m, s);
        out += "d" + c.name();
    }
    return out;
}

std::string frame_text(int m, int slot) { return "p" + CoordinateId::from_slot(m, slot).name(); }

std::string render(const ScalarExpr& e, Format format) {
    switch (format) {
    case Format::Text: return to_text(e);
    case Format::Latex: return to_latex(e);
    case Format::Json: {
        json j{{"kind", "scalar"}, {"degree", 0}};
        json t = coefficient_json(e);
        t["index"] = json::array();
        j["terms"] = e.is_zero() ? json::array() : json::array({t});
        return j.dump();
    }
    }
    return {};
}

std::string render(const Form<ScalarExpr>& a, Format format) {
    const int m = a.dim();
    std::vector<std::string> parts;
    switch (format) {
    case Format::Text:
        for (Mask mask : masks_of(a.terms())) parts.push_back(term_text(a.coefficient(mask), basis_text(m, mask)));
        if (parts.empty()) {
            std::string basis = zero_basis(m, a.degree());
            return basis.empty() ? "0" : "0*" + basis;
        }
        return join(parts, true);
    case Format::Latex:
        for (Mask mask : masks_of(a.terms())) parts.push_back(term_latex(a.coefficient(mask), basis_latex(m, mask)));
        return parts.empty() ? "0" : join(parts, false);
    case Format::Json: {
        json j{{"kind", "form"}, {"degree", a.degree()}, {"m", m}, {"terms", json::array()}};
        for (Mask mask : masks_of(a.terms())) {
            json t = coefficient_json(a.coefficient(mask));
            t["index"] = index_json(mask);
            t["basis"] = basis_text(m, mask);
            j["terms"].push_back(t);
        }
        return j.dump();
    }
    }
    return {};
}

std::string render(const VectorField<ScalarExpr>& X, Format format) {
    const int m = X.dim();
    std::vector<std::string> parts;
    switch (format) {
    case Format::Text:
        for (int s = 0; s < 2 * m; ++s)
            if (!X[s].is_zero()) parts.push_back(term_text(X[s], frame_text(m, s)));
        return parts.empty() ? "0*" + frame_text(m, 0) : join(parts, true);
    case Format::Latex:
        for (int s = 0; s < 2 * m; ++s)
            if (!X[s].is_zero()) parts.push_back(term_latex(X[s], frame_latex(m, s)));
        return parts.empty() ? "0" : join(parts, false);
    case Format::Json: {
        json j{{"kind", "field"}, {"degree", 0}, {"m", m}, {"terms", json::array()}};
        for (int s = 0; s < 2 * m; ++s) {
            if (X[s].is_zero()) continue;
            json t = coefficient_json(X[s]);
            t["index"] = json::array({s + 1});
            t["basis"] = frame_text(m, s);
            j["terms"].push_back(t);
        }
        return j.dump();
    }
    }
    return {};
}

std::string render(const VVForm<ScalarExpr>& K, Format format) {
    const int m = K.dim();
    if (K.degree() == 0 && format != Format::Json) return render(K.value(0), format);
    std::vector<std::string> parts;
    switch (format) {
    case Format::Text:
        for (Mask mask : masks_of(K.terms())) {
            const auto X = K.value(mask);
            for (int s = 0; s < 2 * m; ++s)
                if (!X[s].is_zero())
                    parts.push_back("tensor(" + term_text(X[s], basis_text(m, mask)) + ", " + frame_text(m, s) + ")");
        }
        if (parts.empty()) return "0*tensor(" + zero_basis(m, K.degree()) + ", " + frame_text(m, 0) + ")";
        return join(parts, true);
    case Format::Latex:
        for (Mask mask : masks_of(K.terms())) {
            const auto X = K.value(mask);
            for (int s = 0; s < 2 * m; ++s)
                if (!X[s].is_zero())
                    parts.push_back(term_latex(X[s], basis_latex(m, mask) + "\\otimes " + frame_latex(m, s)));
        }
        return parts.empty() ? "0" : join(parts, false);
    case Format::Json: {
        json j{{"kind", "vvform"}, {"degree", K.degree()}, {"m", m}, {"terms", json::array()}};
        for (Mask mask : masks_of(K.terms())) {
            const auto X = K.value(mask);
            for (int s = 0; s < 2 * m; ++s) {
                if (X[s].is_zero()) continue;
                json t = coefficient_json(X[s]);
                t["index"] = index_json(mask);
                t["basis"] = basis_text(m, mask);
                t["component"] = frame_text(m, s);
                j["terms"].push_back(t);
            }
        }
        return j.dump();
    }
    }
    return {};
}

std::string render(const BaseForm<ScalarExpr>& a, Format format) { return render(a.form(), format); }

std::string render(const BaseVectorField<ScalarExpr>& X, Format format) {
    VectorField<ScalarExpr> Y(X.dim());
    for (int i = 0; i < X.dim(); ++i) Y[i] = X[i];
    return render(Y, format);
}

std::ostream& operator<<(std::ostream& os, const Form<ScalarExpr>& a) { return os << render(a, Format::Text); }
std::ostream& operator<<(std::ostream& os, const VectorField<ScalarExpr>& X) { return os << render(X, Format::Text); }
std::ostream& operator<<(std::ostream& os, const VVForm<ScalarExpr>& K) { return os << render(K, Format::Text); }
std::ostream& operator<<(std::ostream& os, const BaseForm<ScalarExpr>& a) { return os << render(a, Format::Text); }
std::ostream& operator<<(std::ostream& os, const BaseVectorField<ScalarExpr>& X) { return os << render(X, Format::Text); }

} // namespace tmcalc

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmcalc {

/// Largest supported chart dimension m; coordinate ids are laid out in two
/// blocks of this size (base then fiber) ahead of all function generators.
inline constexpr int kMaxDim = 16;

enum class CoordKind : std::uint8_t { Base, Fiber };

/// A chart coordinate x^i (Base) or v^i (Fiber), 1-based.
struct CoordinateId {
    CoordKind kind = CoordKind::Base;
    int index = 1;

    static CoordinateId base(int i) { return {CoordKind::Base, i}; }
    static CoordinateId fiber(int i) { return {CoordKind::Fiber, i}; }

    bool is_base() const { return kind == CoordKind::Base; }
    bool is_fiber() const { return kind == CoordKind::Fiber; }

    /// Position in the ordered TM frame (x^1..x^m, v^1..v^m), 0-based.
    int slot(int m) const { return is_base() ? index - 1 : m + index - 1; }
    static CoordinateId from_slot(int m, int slot) {
        return slot < m ? base(slot + 1) : fiber(slot - m + 1);
    }

    std::string name() const { return (is_base() ? "x" : "v") + std::to_string(index); }

    friend auto operator<=>(const CoordinateId&, const CoordinateId&) = default;
};

enum class Dependence : std::uint8_t { BaseOnly, Full };

/// An abstract smooth function. Base-only symbols are functions on M pulled
/// back to TM, so every fiber partial of them vanishes.
struct FunctionSymbol {
    std::string name;
    Dependence dependence = Dependence::Full;

    bool base_only() const { return dependence == Dependence::BaseOnly; }
    friend auto operator<=>(const FunctionSymbol&, const FunctionSymbol&) = default;
};

using GenId = std::uint32_t;

/// Interned polynomial generator: a coordinate, or a formal partial f_{,I}
/// of a function symbol (I a sorted multiset of coordinates, possibly empty).
///
/// Ids are ordered: x^1 < ... < x^m < v^1 < ... < v^m < functions. Smaller
/// ids are more significant in the lexicographic monomial order.
class Generator {
public:
    Generator() = default;

    static Generator coordinate(CoordinateId c);
    static Generator function(const FunctionSymbol& f, std::vector<CoordinateId> partials = {});
    static Generator from_id(GenId id) { return Generator(id); }

    GenId id() const { return id_; }
    bool is_coordinate() const { return id_ < 2 * kMaxDim; }
    CoordinateId coordinate_id() const;

    /// Only valid for function generators.
    const FunctionSymbol& symbol() const;
    const std::vector<CoordinateId>& partials() const;

    /// d/dc of this generator: 1 for the matching coordinate (returned as
    /// nullopt with `unit` set), f_{,I∪{c}} for functions, nothing when zero.
    struct Derivative;
    Derivative derivative(CoordinateId c) const;

    /// Text form: "x1", "v2", "f", "D(f, x1, v2)".
    std::string name() const;

    /// Deterministic order independent of interning history (for printing).
    static bool value_less(Generator a, Generator b);

    friend auto operator<=>(const Generator&, const Generator&) = default;

private:
    explicit Generator(GenId id) : id_(id) {}
    GenId id_ = 0;
};

struct Generator::Derivative {
    bool unit = false;
    std::optional<Generator> generator;
};

} // namespace tmcalc

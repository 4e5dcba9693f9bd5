#include "tmcalc/generator.hpp"

#include "tmcalc/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <tuple>

namespace tmcalc {

namespace {

struct FunctionRecord {
    FunctionSymbol symbol;
    std::vector<CoordinateId> partials;
};

// Append-only intern table for function generators. Records live in a deque
// so references handed out stay valid while other threads intern.
class Registry {
public:
    static Registry& instance() {
        static Registry registry;
        return registry;
    }

    GenId intern(const FunctionSymbol& f, std::vector<CoordinateId> partials) {
        std::sort(partials.begin(), partials.end());
        auto key = std::make_tuple(f.name, f.dependence, partials);
        {
            std::shared_lock lock(mutex_);
            if (auto it = index_.find(key); it != index_.end()) return it->second;
        }
        std::unique_lock lock(mutex_);
        if (auto it = index_.find(key); it != index_.end()) return it->second;
        const GenId id = static_cast<GenId>(2 * kMaxDim + records_.size());
        records_.push_back({f, std::move(partials)});
        index_.emplace(std::move(key), id);
        return id;
    }

    const FunctionRecord& record(GenId id) const {
        std::shared_lock lock(mutex_);
        return records_.at(id - 2 * kMaxDim);
    }

private:
    mutable std::shared_mutex mutex_;
    std::deque<FunctionRecord> records_;
    std::map<std::tuple<std::string, Dependence, std::vector<CoordinateId>>, GenId> index_;
};

} // namespace

Generator Generator::coordinate(CoordinateId c) {
    if (c.index < 1 || c.index > kMaxDim)
        throw Error(ErrorKind::IndexOutOfRange, "coordinate index " + std::to_string(c.index));
    return Generator(static_cast<GenId>(c.is_base() ? c.index - 1 : kMaxDim + c.index - 1));
}

Generator Generator::function(const FunctionSymbol& f, std::vector<CoordinateId> partials) {
    if (f.base_only()) {
        for (const auto& c : partials)
            if (c.is_fiber())
                throw Error(ErrorKind::InvalidArgument,
                            "base-only symbol " + f.name + " has no fiber partials");
    }
    return Generator(Registry::instance().intern(f, std::move(partials)));
}

CoordinateId Generator::coordinate_id() const {
    return id_ < static_cast<GenId>(kMaxDim) ? CoordinateId::base(static_cast<int>(id_) + 1)
                                             : CoordinateId::fiber(static_cast<int>(id_) - kMaxDim + 1);
}

const FunctionSymbol& Generator::symbol() const { return Registry::instance().record(id_).symbol; }

const std::vector<CoordinateId>& Generator::partials() const {
    return Registry::instance().record(id_).partials;
}

Generator::Derivative Generator::derivative(CoordinateId c) const {
    if (is_coordinate()) return {coordinate_id() == c, std::nullopt};
    const auto& rec = Registry::instance().record(id_);
    if (rec.symbol.base_only() && c.is_fiber()) return {};
    auto partials = rec.partials;
    partials.push_back(c);
    return {false, function(rec.symbol, std::move(partials))};
}

std::string Generator::name() const {
    if (is_coordinate()) return coordinate_id().name();
    const auto& rec = Registry::instance().record(id_);
    if (rec.partials.empty()) return rec.symbol.name;
    std::string out = "D(" + rec.symbol.name;
    for (const auto& c : rec.partials) out += ", " + c.name();
    return out + ")";
}

bool Generator::value_less(Generator a, Generator b) {
    if (a.is_coordinate() || b.is_coordinate()) {
        if (a.is_coordinate() && b.is_coordinate()) return a.id_ < b.id_;
        return a.is_coordinate();
    }
    const auto& ra = Registry::instance().record(a.id_);
    const auto& rb = Registry::instance().record(b.id_);
    return std::tie(ra.symbol, ra.partials) < std::tie(rb.symbol, rb.partials);
}

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::PoleAtPoint: return "PoleAtPoint";
    case ErrorKind::InconsistentBinding: return "InconsistentBinding";
    case ErrorKind::UnboundGenerator: return "UnboundGenerator";
    case ErrorKind::NotBaseOnly: return "NotBaseOnly";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorKind::NotSemiBasic: return "NotSemiBasic";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::NonPolynomialFiberDependence: return "NonPolynomialFiberDependence";
    case ErrorKind::NotAboveMu: return "NotAboveMu";
    case ErrorKind::NotInverse: return "NotInverse";
    case ErrorKind::UnknownLift: return "UnknownLift";
    case ErrorKind::InexactDivision: return "InexactDivision";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndeclaredName: return "UndeclaredName";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    }
    return "Unknown";
}

} // namespace tmcalc

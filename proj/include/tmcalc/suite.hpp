#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tmcalc {

struct SuiteConfig {
    int m_min = 1, m_max = 3;
    /// Random cases per identity and per chart dimension.
    int cases = 25;
    std::uint64_t seed = 0;
    /// Substring of the identity id; empty runs everything.
    std::string filter;
    /// Compare both sides by central differences at random rational points
    /// instead of symbolically.
    bool numeric = false;
};

struct IdentityInfo {
    std::string id, module, anchor;
};

struct IdentityRecord {
    std::string id, module, anchor;
    int cases = 0, failed_cases = 0;
    bool passed = true;
    /// Inputs and mismatch of the first failing case, with its seed.
    std::optional<std::string> counterexample;
    std::uint64_t seed = 0;
    double seconds = 0;
};

struct SuiteReport {
    bool numeric = false;
    std::vector<IdentityRecord> records;

    int total() const { return static_cast<int>(records.size()); }
    int failed() const;
    int cases() const;
    bool all_passed() const { return failed() == 0; }
    /// {suite: [{id, anchor, module, cases, passed, counterexample?, seed, ...}], summary: {total, failed, ...}}
    std::string to_json(bool with_timing = true) const;
    std::string to_text() const;
};

/// Every registered identity, in report order.
std::vector<IdentityInfo> suite_registry();

SuiteReport run_suite(const SuiteConfig& config);

} // namespace tmcalc

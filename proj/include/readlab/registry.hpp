#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "readlab/csv.hpp"
#include "readlab/embedded_data.hpp"
#include "readlab/error.hpp"
#include "readlab/text.hpp"

namespace readlab {

enum class FeatureKind { Count, Score };

struct FeatureDescriptor {
    int index = 0;
    std::string code;
    std::string subgroup;
    std::string branch;
    FeatureKind kind = FeatureKind::Count;
};

inline constexpr std::array<std::string_view, 14> kSubgroups = {
    "WoKF", "WBKF", "OSKF", "EnDF", "EnGF", "PhrF", "TrSF", "POSF", "VarF", "TTRF", "PsyF", "WorF", "ShaF", "TraF"};

inline constexpr std::array<std::string_view, 5> kBranches = {"AdSem", "Disco", "Synta", "LxSem", "ShaTr"};

/// Code naming rules: count-based codes look like `to_NoPhr_C` (prefix
/// to/as/at/ra, five-character stem), score-based ones like `WRich05_S`
/// (seven-character stem).
inline bool valid_feature_code(std::string_view code, FeatureKind kind) {
    static const std::regex count_rx("^(to|as|at|ra)_[A-Za-z0-9]{5}_C$");
    static const std::regex score_rx("^[A-Za-z0-9]{7}_S$");
    const std::string s(code);
    return std::regex_match(s, kind == FeatureKind::Count ? count_rx : score_rx);
}

/// Parses a manifest (index,code,subgroup,branch,kind) and checks it.
inline std::vector<FeatureDescriptor> parse_manifest(std::string_view content) {
    const auto table = csv::parse(content, "feature manifest");
    const auto ci = table.require_column("index", "feature manifest");
    const auto cc = table.require_column("code", "feature manifest");
    const auto cs = table.require_column("subgroup", "feature manifest");
    const auto cb = table.require_column("branch", "feature manifest");
    const auto ck = table.require_column("kind", "feature manifest");
    std::vector<FeatureDescriptor> out;
    std::set<std::string> codes;
    for (const auto& row : table.rows) {
        FeatureDescriptor d;
        d.index = static_cast<int>(text::parse_int(row[ci]));
        d.code = row[cc];
        d.subgroup = row[cs];
        d.branch = row[cb];
        if (row[ck] == "count") d.kind = FeatureKind::Count;
        else if (row[ck] == "score") d.kind = FeatureKind::Score;
        else throw ValidationError("feature manifest: bad kind '" + row[ck] + "' for " + d.code);
        if (!valid_feature_code(d.code, d.kind))
            throw ValidationError("feature manifest: code '" + d.code + "' violates the naming rules");
        if (!codes.insert(d.code).second) throw ValidationError("feature manifest: duplicate code " + d.code);
        if (d.index != static_cast<int>(out.size()) + 1)
            throw ValidationError("feature manifest: indices must run 1..N in order, got " + std::to_string(d.index));
        out.push_back(std::move(d));
    }
    return out;
}

/// The full catalog, in canonical order.
inline const std::vector<FeatureDescriptor>& registry() {
    static const std::vector<FeatureDescriptor> r = parse_manifest(embedded::kFeatureManifest);
    return r;
}

inline const FeatureDescriptor* find_feature(std::string_view code) {
    static const std::map<std::string, std::size_t, std::less<>> index = [] {
        std::map<std::string, std::size_t, std::less<>> m;
        const auto& r = registry();
        for (std::size_t i = 0; i < r.size(); ++i) m.emplace(r[i].code, i);
        return m;
    }();
    auto it = index.find(code);
    return it == index.end() ? nullptr : &registry()[it->second];
}

inline std::vector<std::string> codes_where(auto&& pred) {
    std::vector<std::string> out;
    for (const auto& d : registry())
        if (pred(d)) out.push_back(d.code);
    return out;
}

inline std::vector<std::string> all_codes() {
    return codes_where([](const FeatureDescriptor&) { return true; });
}

/// Named feature sets. Each is a sequence of signed terms; a term names a
/// branch, a subgroup, or an earlier set.
struct FeatureSetDefinition {
    std::string_view name;
    std::string_view expression;
};

inline constexpr std::array<FeatureSetDefinition, 14> kFeatureSets = {{
    {"T1", "+AdSem +Disco +Synta +LxSem +ShaTr"},
    {"T2", "+Disco +Synta +LxSem +ShaTr"},
    {"T3", "+AdSem +Synta +LxSem +ShaTr"},
    {"H1", "+AdSem +Disco"},
    {"L1", "+Synta +LxSem"},
    {"L2", "+L1 -PhrF"},
    {"L3", "+L1 -VarF"},
    {"L4", "+L1 -POSF"},
    {"E1", "+AdSem +PsyF +WorF +TraF"},
    {"E2", "+AdSem +PsyF +WorF"},
    {"E3", "+PsyF +WorF"},
    {"P1", "+EnDF +ShaF +TrSF +POSF +WorF +PsyF +TraF"},
    {"P2", "+P1 +TraF"},
    {"P3", "+P2 +VarF"},
}};

namespace detail {
inline std::set<std::string> resolve_members(std::string_view name, int depth) {
    if (depth > 8) throw ValidationError("feature set definitions are cyclic");
    for (const auto& def : kFeatureSets) {
        if (def.name != name) continue;
        std::set<std::string> members;
        std::string_view expr = def.expression;
        while (!expr.empty()) {
            expr = text::trim(expr);
            if (expr.empty()) break;
            const char op = expr.front();
            expr.remove_prefix(1);
            const auto end = expr.find(' ');
            const auto term = expr.substr(0, end);
            expr = end == std::string_view::npos ? std::string_view{} : expr.substr(end);
            const auto part = resolve_members(term, depth + 1);
            if (op == '+') members.insert(part.begin(), part.end());
            else for (const auto& c : part) members.erase(c);
        }
        return members;
    }
    const auto is_branch = std::find(kBranches.begin(), kBranches.end(), name) != kBranches.end();
    const auto is_subgroup = std::find(kSubgroups.begin(), kSubgroups.end(), name) != kSubgroups.end();
    if (!is_branch && !is_subgroup) throw UsageError("unknown feature set '" + std::string(name) + "'");
    std::set<std::string> members;
    for (const auto& d : registry())
        if ((is_branch && d.branch == name) || (is_subgroup && d.subgroup == name)) members.insert(d.code);
    return members;
}
} // namespace detail

/// Expands a set name (T1, H1, ..., P3) or a single branch/subgroup name to
/// its codes in registry order.
inline std::vector<std::string> resolve_set(std::string_view name) {
    const auto members = detail::resolve_members(name, 0);
    return codes_where([&](const FeatureDescriptor& d) { return members.count(d.code) > 0; });
}

/// Subgroups that contribute at least one code to the list.
inline std::set<std::string> subgroups_of(const std::vector<std::string>& codes) {
    std::set<std::string> out;
    for (const auto& c : codes) {
        if (const auto* d = find_feature(c)) out.insert(d->subgroup);
    }
    return out;
}

} // namespace readlab

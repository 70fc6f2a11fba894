#pragma once

#include <functional>
#include <map>
#include <string>

namespace readlab {

/// Feature code -> value for one document.
using FeatureMap = std::map<std::string, double, std::less<>>;

/// a / b, or 0 when b is 0.
inline double safe_div(double a, double b) { return b == 0.0 ? 0.0 : a / b; }

/// Emits the to_/as_/at_ triple for a count-based quantity.
inline void put_triple(FeatureMap& out, const std::string& stem, double total, double sentences, double tokens) {
    out["to_" + stem + "_C"] = total;
    out["as_" + stem + "_C"] = safe_div(total, sentences);
    out["at_" + stem + "_C"] = safe_div(total, tokens);
}

} // namespace readlab

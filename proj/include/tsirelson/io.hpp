#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsirelson/bounds.hpp"
#include "tsirelson/verification.hpp"
#include "tsirelson/witness.hpp"

namespace tsirelson {

using Json = nlohmann::ordered_json;

inline Json to_json(const BoundReport& r) {
    Json j{{"family", r.family}, {"n", r.n}, {"lower", r.lower}, {"upper", r.upper}};
    if (r.hat_j) j["hat_j"] = *r.hat_j;
    return j;
}

inline BoundReport bound_report_from_json(const Json& j) {
    BoundReport r{j.at("family").get<std::string>(), j.at("n").get<std::uint64_t>(), j.at("lower").get<std::uint64_t>(),
                  j.at("upper").get<std::uint64_t>(), std::nullopt};
    if (j.contains("hat_j")) r.hat_j = j.at("hat_j").get<std::uint64_t>();
    return r;
}

inline Json to_json(const WitnessCertificate& c) {
    Json sets = Json::array(), anchors = Json::array();
    for (const auto& f : c.chain.sets) sets.push_back(f.to_string());
    for (std::size_t i = 0; i < c.chain.anchors_a.size(); ++i)
        anchors.push_back(Json{{"a", c.chain.anchors_a[i]}, {"b", c.chain.anchors_b[i]}});
    return Json{{"family", c.chain.family.name()}, {"d", c.target_d},   {"sets", sets},
                {"anchors", anchors},              {"vector", c.x.to_string()}, {"norm", c.norm_value.to_string()},
                {"depth", c.depth},                {"realizing", c.realizing.to_string()}};
}

inline Json to_json(const ScanReport& r) {
    return Json{{"suite", r.suite},
                {"universe", r.universe},
                {"cases", r.cases},
                {"violation_count", r.violation_count},
                {"violations", r.violations},
                {"expect_violations", r.expect_violations},
                {"passed", r.passed()}};
}

inline ScanReport scan_report_from_json(const Json& j) {
    return ScanReport{j.at("suite").get<std::string>(),
                      j.at("universe").get<std::string>(),
                      j.at("cases").get<std::uint64_t>(),
                      j.at("violation_count").get<std::uint64_t>(),
                      j.at("violations").get<std::vector<std::string>>(),
                      j.at("expect_violations").get<bool>()};
}

namespace detail {

inline std::string csv_cell(const Json& v) {
    std::string s;
    if (v.is_string()) s = v.get<std::string>();
    else if (v.is_null()) s = "";
    else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + csv_cell(v[i]);
    } else s = v.dump();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

}  // namespace detail

// Rows of flat objects as CSV; columns are the union of keys in first-seen order.
inline std::string to_csv(const std::vector<Json>& rows) {
    std::vector<std::string> cols;
    for (const auto& r : rows)
        for (const auto& [k, _] : r.items())
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    std::ostringstream out;
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << (r.contains(cols[i]) ? detail::csv_cell(r[cols[i]]) : "");
        out << "\n";
    }
    return out.str();
}

}  // namespace tsirelson

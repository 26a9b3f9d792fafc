#pragma once

// Oracle table files: {"r": 2, "entries": [{"d":1,"l":1,"k":2,"value":"1"}, ...]}
// with values as exact rational strings.

#include "qgw/gw_engine.hpp"
#include "qgw/rational.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qgw {

struct oracle_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline OracleTable load_oracle_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("r")) throw oracle_error("oracle table: missing 'r' field");
    if (!j.contains("entries") || !j.at("entries").is_array())
        throw oracle_error("oracle table: missing 'entries' array");
    OracleTable out;
    out.r = j.at("r").get<int>();
    if (out.r < 1) throw oracle_error("oracle table: r must be >= 1");
    for (const auto& e : j.at("entries")) {
        if (!e.is_object() || !e.contains("d") || !e.contains("l") || !e.contains("k") || !e.contains("value"))
            throw oracle_error("oracle table: entry needs fields d, l, k, value");
        int d = e.at("d").get<int>();
        int l = e.at("l").get<int>();
        int k = e.at("k").get<int>();
        if (d < 0) throw oracle_error("oracle table: negative degree");
        if (l < 0 || k < 0 || k > out.r) throw oracle_error("oracle table: entry out of range");
        if (!e.at("value").is_string()) throw oracle_error("oracle table: value must be a rational string");
        auto v = parse_rational(e.at("value").get<std::string>());
        if (!v) throw oracle_error("oracle table: bad rational '" + e.at("value").get<std::string>() + "'");
        auto [it, inserted] = out.entries.emplace(std::make_tuple(d, l, k), *v);
        if (!inserted) {
            std::ostringstream os;
            os << "oracle table: duplicate entry (d=" << d << ", l=" << l << ", k=" << k << ")";
            throw oracle_error(os.str());
        }
    }
    return out;
}

inline OracleTable load_oracle(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw oracle_error("cannot open oracle file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw oracle_error("oracle file '" + path + "' is not valid JSON: " + e.what());
    }
    return load_oracle_json(j);
}

} // namespace qgw

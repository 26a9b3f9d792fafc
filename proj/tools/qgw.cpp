// Command-line frontend: J-function tables, quantum K evaluation with
// optional reduction traces and a persistent result cache, and the two
// Gromov-Witten engines with cross-checking.
//
// Exit codes: 0 success, 1 usage or parse error, 2 engine error,
// 3 cross-check mismatch.

#include "qgw/cache.hpp"
#include "qgw/gw_engine.hpp"
#include "qgw/jfunction.hpp"
#include "qgw/oracle_io.hpp"
#include "qgw/parser.hpp"
#include "qgw/qk_engine.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_engine = 2;
constexpr int exit_mismatch = 3;

std::string trace_line(const qgw::TraceStep<qgw::QkKey>& step) {
    std::string line = std::string(qgw::rule_name(step.rule)) + ": " + qgw::format_key(step.before);
    if (!step.after.empty()) {
        line += " -> ";
        bool first = true;
        for (const auto& [w, k] : step.after) {
            if (!first) line += " + ";
            first = false;
            if (w != 1) line += qgw::to_string(w) + "*";
            line += "[" + qgw::format_key(k) + "]";
        }
    }
    line += "  = " + qgw::to_string(step.value);
    return line;
}

int run_jk(int r, int d, int order, const std::string& cls_text, const std::string& format) {
    qgw::KClass gamma = qgw::parse_k_class(cls_text, r);
    qgw::QSeries<qgw::Rational> series = qgw::one_point_series(r, d, gamma, order);
    if (format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (int k = 0; k <= order; ++k)
            rows.push_back({{"d", d}, {"k", k}, {"value", qgw::to_string(series[static_cast<std::size_t>(k)])}});
        nlohmann::json out{{"r", r}, {"class", cls_text}, {"rows", rows}};
        std::cout << out.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "d,k,value\n";
        for (int k = 0; k <= order; ++k)
            std::cout << d << ',' << k << ',' << qgw::to_string(series[static_cast<std::size_t>(k)]) << '\n';
    } else {
        for (int k = 0; k <= order; ++k)
            std::cout << d << '\t' << k << '\t' << qgw::to_string(series[static_cast<std::size_t>(k)]) << '\n';
    }
    return exit_ok;
}

int run_qk(const std::string& expr, int r, const std::string& cache_flag, bool no_cache, bool trace,
           const std::string& format) {
    qgw::ParsedInvariant parsed = qgw::parse_invariant_expr(expr);
    auto raw = qgw::to_k_insertions(parsed, r);

    qgw::QkSession session(r, trace);
    qgw::LinComb<qgw::QkKey> comb = session.normalize(raw, parsed.d);
    qgw::Rational value = session.evaluate(comb);

    std::string cache_path = no_cache ? std::string{} : qgw::cache_default_path(cache_flag);
    if (!cache_path.empty()) {
        qgw::CacheFile cache;
        cache.theory = "qk-p" + std::to_string(r);
        if (std::filesystem::exists(cache_path)) cache.merge(qgw::cache_load(cache_path));
        for (const auto& [key, val] : session.memo()) cache.put(qgw::format_key(key), val);
        qgw::cache_store(cache, cache_path);
    }

    if (format == "json") {
        nlohmann::json out{{"expr", expr}, {"r", r}, {"value", qgw::to_string(value)}};
        if (trace) {
            nlohmann::json steps = nlohmann::json::array();
            for (const auto& step : session.trace()) {
                nlohmann::json children = nlohmann::json::array();
                for (const auto& [w, k] : step.after)
                    children.push_back({{"weight", qgw::to_string(w)}, {"key", qgw::format_key(k)}});
                steps.push_back({{"rule", qgw::rule_name(step.rule)},
                                 {"key", qgw::format_key(step.before)},
                                 {"after", children},
                                 {"value", qgw::to_string(step.value)}});
            }
            out["trace"] = steps;
        }
        std::cout << out.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "key,value\n" << '"' << expr << "\"," << qgw::to_string(value) << '\n';
    } else {
        std::cout << qgw::to_string(value) << '\n';
        if (trace)
            for (const auto& step : session.trace()) std::cout << "# " << trace_line(step) << '\n';
    }
    return exit_ok;
}

int run_gw(const std::string& expr, int p2_table, int r, const std::string& oracle_path,
           const std::string& engine, const std::string& format) {
    if (p2_table > 0) {
        std::vector<std::pair<int, qgw::Rational>> rows;
        qgw::GwSession session(2);
        for (int d = 1; d <= p2_table; ++d) {
            qgw::Rational closed = qgw::kontsevich_N(d);
            if (engine == "reduction" || engine == "both") {
                qgw::Rational reduced = qgw::gw_pointed_count(d, session);
                if (engine == "both" && reduced != closed) {
                    std::cerr << "cross-check mismatch at d=" << d << ": closed " << qgw::to_string(closed)
                              << " vs reduction " << qgw::to_string(reduced) << '\n';
                    return exit_mismatch;
                }
                if (engine == "reduction") closed = reduced;
            }
            rows.emplace_back(d, closed);
        }
        if (format == "json") {
            nlohmann::json out = nlohmann::json::array();
            for (const auto& [d, v] : rows) out.push_back({{"d", d}, {"N", qgw::to_string(v)}});
            std::cout << out.dump(2) << '\n';
        } else if (format == "csv") {
            std::cout << "d,N\n";
            for (const auto& [d, v] : rows) std::cout << d << ',' << qgw::to_string(v) << '\n';
        } else {
            for (const auto& [d, v] : rows) std::cout << d << '\t' << qgw::to_string(v) << '\n';
        }
        return exit_ok;
    }

    qgw::ParsedInvariant parsed = qgw::parse_invariant_expr(expr);
    auto raw = qgw::to_coh_insertions(parsed, r);
    qgw::OracleTable oracle;
    bool have_oracle = !oracle_path.empty();
    if (have_oracle) {
        oracle = qgw::load_oracle(oracle_path);
        if (oracle.r != r) {
            std::cerr << "oracle table is for P^" << oracle.r << ", expression uses r=" << r << '\n';
            return exit_usage;
        }
    }
    qgw::GwSession session(r, have_oracle ? &oracle : nullptr);
    qgw::Rational value = session.evaluate(session.normalize(raw, parsed.d));
    if (format == "json") {
        nlohmann::json out{{"expr", expr}, {"r", r}, {"value", qgw::to_string(value)}};
        std::cout << out.dump(2) << '\n';
    } else if (format == "csv") {
        std::cout << "key,value\n" << '"' << expr << "\"," << qgw::to_string(value) << '\n';
    } else {
        std::cout << qgw::to_string(value) << '\n';
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact genus-0 Gromov-Witten / quantum K computations on projective space"};
    app.require_subcommand(1);

    // jk
    auto* jk = app.add_subcommand("jk", "1-point quantum K series from the J-function");
    int jk_r = 1, jk_d = 1, jk_order = 2;
    std::string jk_class = "e1", jk_format = "text";
    jk->add_option("--r", jk_r, "target P^r")->check(CLI::Range(1, 8));
    jk->add_option("--d", jk_d, "degree (>= 1)")->required();
    jk->add_option("--order", jk_order, "highest cotangent power")->check(CLI::Range(0, 4096));
    jk->add_option("--class", jk_class, "insertion class, e.g. 'e1' or 'H-1'");
    jk->add_option("--format", jk_format, "text|json|csv")->check(CLI::IsMember({"text", "json", "csv"}));

    // qk
    auto* qk = app.add_subcommand("qk", "evaluate a quantum K invariant of P^1");
    std::string qk_expr, qk_cache, qk_format = "text";
    int qk_r = 1;
    bool qk_trace = false, qk_no_cache = false;
    qk->add_option("expr", qk_expr, "invariant, e.g. \"(L^2*e1, e1) @ d=1\"")->required();
    qk->add_option("--r", qk_r, "target P^r")->check(CLI::Range(1, 4));
    qk->add_option("--cache", qk_cache, "cache file (default: $QGW_CACHE)");
    qk->add_flag("--no-cache", qk_no_cache, "do not touch the cache");
    qk->add_flag("--trace", qk_trace, "print the reduction trace");
    qk->add_option("--format", qk_format, "text|json|csv")->check(CLI::IsMember({"text", "json", "csv"}));

    // gw
    auto* gw = app.add_subcommand("gw", "Gromov-Witten invariants of P^2");
    std::string gw_expr, gw_oracle, gw_engine = "closed", gw_format = "text";
    int gw_table = 0, gw_r = 2;
    gw->add_option("expr", gw_expr, "invariant, e.g. \"(H^2, H^2) @ d=1\"");
    gw->add_option("--p2-table", gw_table, "print N_1..N_D")->check(CLI::Range(1, 64));
    gw->add_option("--r", gw_r, "target P^r")->check(CLI::Range(1, 8));
    gw->add_option("--oracle", gw_oracle, "1-point oracle table (JSON)");
    gw->add_option("--engine", gw_engine, "closed|reduction|both")
        ->check(CLI::IsMember({"closed", "reduction", "both"}));
    gw->add_option("--format", gw_format, "text|json|csv")->check(CLI::IsMember({"text", "json", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try {
        if (jk->parsed()) return run_jk(jk_r, jk_d, jk_order, jk_class, jk_format);
        if (qk->parsed()) return run_qk(qk_expr, qk_r, qk_cache, qk_no_cache, qk_trace, qk_format);
        if (gw->parsed()) {
            if (gw_table == 0 && gw_expr.empty()) {
                std::cerr << "gw: need either --p2-table or an invariant expression\n";
                return exit_usage;
            }
            if (gw_table > 0 && gw_engine == "closed" && !gw_expr.empty()) {
                std::cerr << "gw: give either --p2-table or an expression, not both\n";
                return exit_usage;
            }
            return run_gw(gw_expr, gw_table, gw_r, gw_oracle, gw_engine, gw_format);
        }
    } catch (const qgw::parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return exit_usage;
    } catch (const qgw::unstable_key& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const qgw::irreducible_configuration& e) {
        std::cerr << "engine error: " << e.what() << '\n';
        return exit_engine;
    } catch (const qgw::missing_oracle_entry& e) {
        std::cerr << "engine error: " << e.what() << '\n';
        return exit_engine;
    } catch (const qgw::oracle_error& e) {
        std::cerr << "engine error: " << e.what() << '\n';
        return exit_engine;
    } catch (const qgw::cache_error& e) {
        std::cerr << "engine error: " << e.what() << '\n';
        return exit_engine;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_engine;
    }
    return exit_usage;
}

// Acceptance run: one PASS/FAIL line per criterion. Tolerances are fixed here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include "json.hpp"
#include "trifree/analysis.hpp"
#include "trifree/params.hpp"
#include "trifree/verify.hpp"

using namespace trifree;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 20240601;

// criterion 10
constexpr int kWindowN = 5000;
constexpr std::uint64_t kWindowReplicas = 10000;
constexpr double kWindowTolerance = 0.05;

// criterion 11
constexpr double kGiantExponent = 2.0 / 3;
constexpr double kGiantExponentTolerance = 0.15;
constexpr std::uint64_t kGiantReplicas = 20;
constexpr int kConnectivityN = 4000;
constexpr double kConnectedAbove = 0.9;
constexpr double kConnectedBelow = 0.1;

// criterion 12
constexpr int kCrossingN = 2000;
constexpr double kCrossingC = 1.2;  // m = c/4 n^{3/2} sqrt(log n)
constexpr std::uint64_t kCrossingReplicas = 100;
constexpr std::uint64_t kCrossingDraws = 10000;
constexpr double kScaledLow = 0.7, kScaledHigh = 1.3;
constexpr int kHardcoreN = 2000, kHardcoreDegree = 10;
constexpr double kHardcoreLambda = 0.005;
constexpr std::uint64_t kHardcoreDraws = 200000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// all checks must pass; detail lists each
Outcome from_checks(const std::vector<Check>& checks)
{
    Outcome o{true, ""};
    for (const auto& c : checks) {
        o.pass = o.pass && c.passed;
        if (!o.detail.empty())
            o.detail += "; ";
        o.detail += c.name + (c.passed ? " ok" : " FAILED") + " " + c.detail.dump();
    }
    return o;
}

Outcome criterion_window()
{
    std::uint64_t m = std::uint64_t(std::llround(double(m_window(kWindowN, 0))));
    auto r = bipartite_distance_experiment(kWindowN, m, kWindowReplicas, kSeed);
    double p = r.aggregate["p_bipartite"]["frequency"];
    double target = bipartite_window_limit(0);
    return {std::abs(p - target) <= kWindowTolerance,
            "n=" + std::to_string(kWindowN) + " m=" + std::to_string(m) +
                " P(bipartite)=" + fmt(p) + " target=" + fmt(target) + " +- " +
                fmt(kWindowTolerance) + " ci95=" +
                fmt(r.aggregate["p_bipartite"]["ci95_halfwidth"]) + " window_t=" +
                fmt(r.aggregate["window_t"]) + " binomial_reference=" +
                fmt(r.aggregate["p_bipartite_binomial"]) + " fallbacks=" +
                r.aggregate["fallbacks"].dump() + " P(no defects drawn)=" +
                fmt(r.aggregate["p_no_defects"]["frequency"])};
}

Outcome criterion_giant()
{
    GiantOptions crit;
    crit.which = GiantCase::critical;
    auto r2 = giant_component_experiment(crit, kGiantReplicas, kSeed);
    double slope = r2.aggregate["exponent"];
    bool exp_ok = std::abs(slope - kGiantExponent) <= kGiantExponentTolerance;
    std::string sizes;
    for (auto& p : r2.aggregate["per_n"])
        sizes += " n" + std::to_string(p["n"].get<int>()) + ":" + fmt(p["mean_largest"]) +
                 "(cap " + std::to_string(p["degree_cap"].get<int>()) + ")";

    GiantOptions conn;
    conn.which = GiantCase::connectivity;
    conn.ns = {kConnectivityN};
    conn.above_threshold = true;
    auto above = giant_component_experiment(conn, kGiantReplicas, kSeed + 1);
    conn.above_threshold = false;
    auto below = giant_component_experiment(conn, kGiantReplicas, kSeed + 2);
    double fa = above.aggregate["per_n"][0]["connected"]["frequency"];
    double fb = below.aggregate["per_n"][0]["connected"]["frequency"];
    bool conn_ok = fa >= kConnectedAbove && fb <= kConnectedBelow;
    return {exp_ok && conn_ok,
            "case2 exponent=" + fmt(slope) + " (target " + fmt(kGiantExponent) + " +- " +
                fmt(kGiantExponentTolerance) + ", r2=" + fmt(r2.aggregate["exponent_r2"]) +
                ") mean largest:" + sizes + "; case5 connected above=" + fmt(fa) +
                " below=" + fmt(fb)};
}

Outcome criterion_lclt()
{
    std::uint64_t m = std::uint64_t(std::llround(double(m_at_c(kCrossingN, kCrossingC))));
    auto cr = crossing_lclt_experiment(kCrossingN, m, kCrossingReplicas, kCrossingDraws, kSeed);
    double scaled = cr.aggregate["scaled_hit_frequency"];
    bool cross_ok = scaled >= kScaledLow && scaled <= kScaledHigh;
    auto hc = hardcore_lclt_experiment(kHardcoreN, kHardcoreDegree, kHardcoreLambda,
                                       kHardcoreDraws, kSeed);
    double sup = hc.aggregate["sup_deviation"], bound = hc.aggregate["bound"];
    return {cross_ok && sup <= bound,
            "crossing scaled hit frequency=" + fmt(scaled) + " (ci95 " +
                fmt(cr.aggregate["scaled_ci95_halfwidth"]) + ", draws " +
                std::to_string(cr.aggregate["hit_frequency"]["trials"].get<std::uint64_t>()) +
                "); hard-core sup deviation=" + fmt(sup) + " bound=" + fmt(bound)};
}

}  // namespace

int main()
{
    VerifyOptions vo;
    vo.seed = kSeed;
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 exact counts", [] { return from_checks({check_exact_counts()}); }},
        {"2 defect product identity", [] { return from_checks({check_defect_identity()}); }},
        {"3 ursell values", [] { return from_checks({check_ursell_values()}); }},
        {"4 penrose and cayley", [] { return from_checks({check_penrose_cayley()}); }},
        {"5 certified truncation", [&] { return from_checks(check_truncation(vo)); }},
        {"6 product subgraph counts", [&] { return from_checks({check_product_counts(vo)}); }},
        {"7 samplers vs exact laws", [&] { return from_checks(check_samplers_vs_oracle(vo)); }},
        {"8 formula overlap", [] { return from_checks(check_formula_overlap()); }},
        {"9 sandwich containment",
         [&] {
             auto checks = check_sandwich(vo);
             checks.resize(1);  // the coupling inequality is reported by verify
             return from_checks(checks);
         }},
        {"10 scaling-window point", criterion_window},
        {"11 giant-component exponent", criterion_giant},
        {"12 local limit constants", criterion_lclt},
    };
    int failed = 0;
    for (auto& [name, run] : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << " [" << fmt(secs)
                  << " s] " << o.detail << std::endl;
    }
    std::cout << (12 - failed) << "/12 criteria passed" << std::endl;
    return failed ? 1 : 0;
}

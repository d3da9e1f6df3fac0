#include "trifree/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "trifree/cluster.hpp"
#include "trifree/hardcore.hpp"
#include "trifree/oracle.hpp"
#include "trifree/parallel.hpp"
#include "trifree/params.hpp"
#include "trifree/samplers.hpp"

namespace trifree {

using nlohmann::json;

bool SuiteReport::passed() const
{
    for (const auto& c : checks)
        if (!c.passed)
            return false;
    return true;
}

json SuiteReport::to_json() const
{
    json out{{"suite", suite}, {"passed", passed()}, {"checks", json::array()}};
    for (const auto& c : checks)
        out["checks"].push_back(
            {{"name", c.name}, {"passed", c.passed}, {"seconds", c.seconds}, {"detail", c.detail}});
    return out;
}

namespace {

template <class F>
auto timed(F&& f)
{
    auto t0 = std::chrono::steady_clock::now();
    auto out = f();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if constexpr (std::is_same_v<decltype(out), Check>) {
        out.seconds = s;
    } else {
        for (auto& c : out)
            c.seconds = s / double(out.size());
    }
    return out;
}

std::uint64_t scaled(double base, double scale)
{
    return std::max<std::uint64_t>(1, std::uint64_t(std::llround(base * scale)));
}

BitGraph bits(int n, std::initializer_list<EdgePair> edges)
{
    BitGraph b(n);
    for (auto [u, v] : edges)
        b.add_edge(u, v);
    return b;
}

std::string to_string(const Rational& r)
{
    return r.str();
}

json counts_json(const SubgraphCounts& c)
{
    return {{"edges", c.edges}, {"p2", c.p2}, {"p3", c.p3}, {"s3", c.s3}, {"c4", c.c4}};
}

}  // namespace

Check check_exact_counts()
{
    Check c{"exact-counts"};
    CountTable t3 = enumerate_tfree(3), t4 = enumerate_tfree(4);
    std::vector<BigInt> want4{1, 6, 15, 16, 3, 0, 0};
    bool ok = t3.total() == 7 && t4.total() == 41 && t4.counts == want4;
    json agree = json::array();
    for (int n = 1; n <= kFilterAllCap; ++n) {
        CountTable a = enumerate_tfree_walk(n), b = enumerate_tfree_filter(n);
        bool same = a.counts == b.counts;
        ok = ok && same;
        agree.push_back({{"n", n}, {"total", a.total().str()}, {"agree", same}});
    }
    json per_m = json::array();
    for (const auto& x : t4.counts)
        per_m.push_back(x.str());
    c.passed = ok;
    c.detail = {{"total_n3", t3.total().str()},
                {"total_n4", t4.total().str()},
                {"per_m_n4", per_m},
                {"methods", agree}};
    return c;
}

Check check_defect_identity()
{
    Check c{"defect-product-identity"};
    std::vector<Rational> lambdas{Rational(1, 3), Rational(1, 2), Rational(1)};
    std::uint64_t pairs = 0, bad = 0, bad_values = 0;
    for (int a = 1; a <= 4; ++a)
        for (int b = 1; b <= 4; ++b) {
            ProductIdentityReport r = check_defect_product_identity(a, b, lambdas);
            pairs += r.pairs;
            bad += r.mismatches;
            bad_values += r.value_mismatches;
        }
    c.passed = pairs > 0 && bad == 0 && bad_values == 0;
    c.detail = {{"pairs", pairs}, {"polynomial_mismatches", bad}, {"value_mismatches", bad_values}};
    return c;
}

Check check_ursell_values()
{
    Check c{"ursell-values"};
    struct Case {
        const char* type;
        BitGraph h;
        Rational want;
    };
    std::vector<Case> cases{
        {"K2", bits(2, {{0, 1}}), Rational(-1, 2)},
        {"P2", bits(3, {{0, 1}, {1, 2}}), Rational(1, 6)},
        {"K3", bits(3, {{0, 1}, {1, 2}, {0, 2}}), Rational(1, 3)},
        {"K4", bits(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), Rational(-1, 4)},
        {"K4-e", bits(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}}), Rational(-1, 6)},
        {"paw", bits(4, {{0, 1}, {1, 2}, {0, 2}, {2, 3}}), Rational(-1, 12)},
        {"P3", bits(4, {{0, 1}, {1, 2}, {2, 3}}), Rational(-1, 24)},
        {"S3", bits(4, {{0, 1}, {0, 2}, {0, 3}}), Rational(-1, 24)},
        {"C4", bits(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), Rational(-1, 8)},
    };
    c.passed = true;
    c.detail = json::array();
    for (const auto& k : cases) {
        Rational got = ursell_of(k.h);
        bool ok = got == k.want;
        c.passed = c.passed && ok;
        c.detail.push_back(
            {{"type", k.type}, {"value", to_string(got)}, {"expected", to_string(k.want)}, {"ok", ok}});
    }
    return c;
}

Check check_penrose_cayley()
{
    Check c{"penrose-cayley"};
    std::uint64_t tested = 0, violations = 0;
    for (int k = 1; k <= 6; ++k) {
        int pairs = k * (k - 1) / 2;
        for (std::uint64_t mask = 0; mask < (1ull << pairs); ++mask) {
            Graph g = graph_from_edge_mask(k, mask);
            if (!is_connected(g))
                continue;
            BitGraph h = to_bits(g);
            ++tested;
            if (std::uint64_t(std::llabs(signed_connected_sum(h))) > penrose_tree_bound(h))
                ++violations;
        }
    }
    json cayley = json::array();
    bool cay_ok = true;
    for (int k = 1; k <= 8; ++k) {
        BitGraph kk(k);
        for (int u = 0; u < k; ++u)
            for (int v = u + 1; v < k; ++v)
                kk.add_edge(u, v);
        std::uint64_t want = k < 2 ? 1 : std::uint64_t(std::llround(std::pow(double(k), k - 2)));
        std::uint64_t got = penrose_tree_bound(kk);
        cay_ok = cay_ok && got == want;
        cayley.push_back({{"k", k}, {"trees", got}, {"expected", want}});
    }
    c.passed = tested > 0 && violations == 0 && cay_ok;
    c.detail = {{"connected_graphs", tested}, {"violations", violations}, {"cayley", cayley}};
    return c;
}

std::vector<Check> check_truncation(const VerifyOptions& o)
{
    Check tail{"certified-truncation"}, order{"truncation-order"};
    constexpr int kGraphs = 50;
    tail.detail = json::array();
    order.detail = json::array();
    bool tail_ok = true, order_ok = true;
    RngStream rng(o.seed, 0, Stage::test, 5);
    for (int i = 0; i < kGraphs; ++i) {
        int n = 4 + int(rng.below(9));
        Graph g = random_triangle_free(n, 4, 0.2 + 0.6 * rng.uniform(), rng);
        int delta = std::max(1, g.max_degree());
        long double lambda = 1.0L / (8 * std::exp(1.0L) * delta);
        LogZResult r = truncated_log_Z(g, lambda, 6);
        long double exact = exact_log_Z_ratio(g, lambda);
        long double err = std::abs(r.value - exact);
        bool ok = err <= r.certified_tail;
        tail_ok = tail_ok && ok;
        tail.detail.push_back({{"n", n},
                               {"edges", g.num_edges()},
                               {"max_degree", g.max_degree()},
                               {"error", double(err)},
                               {"tail", double(r.certified_tail)},
                               {"ok", ok}});
        if (g.num_edges() == 0)
            continue;
        // errors at lambda, lambda/2, lambda/4
        double e3[3], e4[3];
        for (int h = 0; h < 3; ++h) {
            long double l = lambda / (1 << h);
            long double ex = exact_log_Z_ratio(g, l);
            e3[h] = double(std::abs(third_order_log_Z_ratio(g, l) - ex));
            e4[h] = double(std::abs(fourth_order_log_Z_ratio(g, l) - ex));
        }
        json row{{"n", n}, {"edges", g.num_edges()}, {"ratios3", json::array()},
                 {"ratios4", json::array()}};
        bool row_ok = true;
        for (int h = 0; h < 2; ++h) {
            double r3 = e3[h + 1] / e3[h], r4 = e4[h + 1] / e4[h];
            row["ratios3"].push_back(r3);
            row["ratios4"].push_back(r4);
            row_ok = row_ok && r3 >= 1.0 / 32 && r3 <= 1.0 / 8 && r4 >= 1.0 / 64 && r4 <= 1.0 / 16;
        }
        row["ok"] = row_ok;
        order_ok = order_ok && row_ok;
        order.detail.push_back(row);
    }
    tail.passed = tail_ok;
    order.passed = order_ok;
    return {tail, order};
}

Check check_product_counts(const VerifyOptions& o)
{
    Check c{"product-subgraph-counts"};
    std::uint64_t pairs = 0, bad = 0;
    json first_bad;
    auto test = [&](const Graph& s, const Graph& t) {
        ++pairs;
        SubgraphCounts want = subgraph_counts(cartesian_product(s, t));
        SubgraphCounts got = product_subgraph_counts(s.n(), t.n(), subgraph_counts(s), subgraph_counts(t));
        if (!(want == got)) {
            if (bad++ == 0)
                first_bad = {{"a", s.n()}, {"b", t.n()}, {"direct", counts_json(want)},
                             {"formula", counts_json(got)}};
        }
    };
    std::vector<std::vector<Graph>> small(6);
    for (int k = 1; k <= 5; ++k)
        for_each_tfree(k, [&](const BitGraph& b) { small[k].push_back(from_bits(b)); });
    for (int a = 1; a <= 5; ++a)
        for (int b = 1; b <= 5; ++b)
            for (const auto& s : small[a])
                for (const auto& t : small[b])
                    test(s, t);
    std::uint64_t exhaustive = pairs;
    RngStream rng(o.seed, 0, Stage::test, 6);
    for (int i = 0; i < 1000; ++i) {
        Graph s = random_triangle_free(8, 7, rng.uniform(), rng);
        Graph t = random_triangle_free(8, 7, rng.uniform(), rng);
        test(s, t);
    }
    c.passed = bad == 0;
    c.detail = {{"exhaustive_pairs", exhaustive}, {"random_pairs", pairs - exhaustive},
                {"mismatches", bad}};
    if (bad)
        c.detail["first_mismatch"] = first_bad;
    return c;
}

namespace {

using Counts = std::unordered_map<std::uint64_t, std::uint64_t>;

Counts tally(const std::vector<std::uint64_t>& xs)
{
    Counts c;
    for (auto x : xs)
        ++c[x];
    return c;
}

MaskPmf normalise(const Counts& c, std::uint64_t draws)
{
    MaskPmf p;
    for (auto [k, v] : c)
        p[k] = (long double)v / draws;
    return p;
}

Check model_check(const char* name, Model model, const ModelArgs& args, std::uint64_t draws,
                  double tol, const VerifyOptions& o,
                  const std::function<SampleOutcome(RngStream&)>& sample)
{
    Check c{name};
    ModelPmf law = exact_model_pmf(model, args);
    std::vector<std::uint64_t> masks(draws);
    parallel_for(draws, [&](std::size_t r) {
        RngStream rng(o.seed, r);
        masks[r] = edge_mask(sample(rng).graph);
    });
    Counts counts = tally(masks);
    long double ctv = class_tv(counts, draws, law);
    long double ltv = labeled_tv(counts, draws, law);
    c.passed = ctv <= tol;
    c.detail = {{"draws", draws},
                {"tv_classes", double(ctv)},
                {"tv_labelled", double(ltv)},
                {"tolerance", tol},
                {"gated_on", "classes"},
                {"classes_in_law", law.classes.size()},
                {"distinct_labelled_draws", counts.size()},
                {"fallback_mass", double(law.fallback_mass)}};
    return c;
}

}  // namespace

std::vector<Check> check_samplers_vs_oracle(const VerifyOptions& o)
{
    std::vector<Check> out;
    {
        Check c{"hardcore-sampler"};
        // the 3-cube
        Graph g(8);
        for (int v = 0; v < 8; ++v)
            for (int bit = 0; bit < 3; ++bit)
                if (v < (v ^ (1 << bit)))
                    g.add_edge(v, v ^ (1 << bit));
        long double lambda = 0.1L;
        std::uint64_t draws = scaled(1e5, o.scale);
        HardcorePlan plan = HardcorePlan::for_graph(g);
        std::vector<std::uint64_t> sets(draws);
        parallel_for(draws, [&](std::size_t r) {
            RngStream rng(o.seed, r, Stage::crossing);
            std::uint64_t m = 0;
            for (auto v : plan.sample(lambda, rng))
                m |= 1ull << v;
            sets[r] = m;
        });
        long double tv = tv_distance(normalise(tally(sets), draws), exact_hardcore_pmf(g, lambda));
        c.passed = tv <= 0.02;
        c.detail = {{"graph", "Q3"}, {"lambda", 0.1}, {"draws", draws}, {"tv", double(tv)},
                    {"tolerance", 0.02}};
        out.push_back(c);
    }
    {
        Check c{"cerg-sampler"};
        int v = 5;
        double q = 0.3, psi = 0.05;
        std::uint64_t draws = scaled(1e5, o.scale);
        std::vector<std::uint64_t> masks(draws);
        parallel_for(draws, [&](std::size_t r) {
            RngStream rng(o.seed, r, Stage::chain);
            masks[r] = edge_mask(sample_cond_erg(v, q, psi, rng, default_sweeps(v)));
        });
        long double tv = tv_distance(normalise(tally(masks), draws), exact_cerg_pmf(v, q, psi, 0));
        c.passed = tv <= 0.05;
        c.detail = {{"vertices", v}, {"q", q}, {"psi", psi}, {"sweeps", default_sweeps(v)},
                    {"draws", draws}, {"tv", double(tv)}, {"tolerance", 0.05}};
        out.push_back(c);
    }
    {
        ModelArgs a;
        a.n = 7;
        a.lambda = 0.3L;
        out.push_back(model_check("mu_lambda1-sampler", Model::mu_lambda1, a, scaled(1e6, o.scale),
                                  0.01, o, [](RngStream& rng) {
                                      return sample_mu_lambda1(7, 0.3L, rng);
                                  }));
    }
    {
        ModelArgs a;
        a.n = 8;
        a.m = 10;
        out.push_back(model_check("mu_m1-sampler", Model::mu_m1, a, scaled(1e6, o.scale), 0.01, o,
                                  [](RngStream& rng) { return sample_mu_m1(8, 10, rng); }));
    }
    return out;
}

std::vector<Check> check_formula_overlap()
{
    Check counts{"count-formula-overlap"}, gnp{"gnp-formula-overlap"};
    counts.detail = json::array();
    gnp.detail = json::array();
    double worst_counts = 0, worst_gnp = 0;
    for (double n : {1e4, 1e5, 1e6})
        for (int ci = 0; ci <= 6; ++ci) {
            double c = 1.1 + 0.1 * ci;
            real m = std::round(m_at_c(n, c));
            real sub = log_count_subcritical(n, m), sup = log_count_supercritical(n, m);
            double rel = double(std::abs(sub - sup) / std::abs(sub));
            worst_counts = std::max(worst_counts, rel);
            counts.detail.push_back({{"n", n}, {"c", c}, {"sub", double(sub)},
                                     {"super", double(sup)}, {"relative", rel}});
            real p = prob_from_odds(global_params_m(n, m).lambda);
            real gs = log_prob_triangle_free_gnp(n, p, Variant::subcritical);
            real gu = log_prob_triangle_free_gnp(n, p, Variant::supercritical);
            double relg = double(std::abs(gs - gu) / std::abs(gs));
            worst_gnp = std::max(worst_gnp, relg);
            gnp.detail.push_back({{"n", n}, {"c", c}, {"p", double(p)}, {"sub", double(gs)},
                                  {"super", double(gu)}, {"relative", relg}});
        }
    counts.passed = worst_counts <= 1e-3;
    gnp.passed = worst_gnp <= 1e-3;
    counts.detail = {{"worst_relative", worst_counts}, {"tolerance", 1e-3}, {"grid", counts.detail}};
    gnp.detail = {{"worst_relative", worst_gnp}, {"tolerance", 1e-3}, {"grid", gnp.detail}};
    return {counts, gnp};
}

std::vector<Check> check_sandwich(const VerifyOptions& o)
{
    Check contain{"sandwich-containment"}, coupling{"sandwich-coupling-inequality"};
    {
        double n = 1000;
        GlobalParams gp = global_params_m(n, std::ceil(13.0 / 56 * std::pow(n, 1.5) *
                                                      std::sqrt(std::log(n))));
        int side = 500, runs = 100;
        std::vector<int> ok(runs), lower_edges(runs), middle_edges(runs), upper_edges(runs);
        parallel_for(runs, [&](std::size_t r) {
            RngStream rng(o.seed, r, Stage::sandwich);
            SandwichTriple t = sandwich_sample(side, gp, rng);
            ok[r] = t.containment_ok;
            lower_edges[r] = int(t.lower.num_edges());
            middle_edges[r] = int(t.middle.num_edges());
            upper_edges[r] = int(t.upper.num_edges());
        });
        int good = 0;
        double ml = 0, mm = 0, mu = 0;
        for (int r = 0; r < runs; ++r) {
            good += ok[r];
            ml += lower_edges[r];
            mm += middle_edges[r];
            mu += upper_edges[r];
        }
        SandwichRates rates = sandwich_rates(gp);
        bool ordered = rates.q_lower <= rates.q_middle && rates.q_middle <= rates.q_upper;
        contain.passed = good >= 99 && ordered;
        contain.detail = {{"n", n},
                          {"side", side},
                          {"runs", runs},
                          {"contained", good},
                          {"required", 99},
                          {"q_lower", rates.q_lower},
                          {"q_middle", rates.q_middle},
                          {"q_upper", rates.q_upper},
                          {"psi", rates.psi},
                          {"mean_edges", {ml / runs, mm / runs, mu / runs}}};
    }
    {
        // small n so that the three rates differ visibly
        GlobalParams gp = global_params_lambda(40, 0.45L);
        int side = 5;
        SandwichLaws laws = exact_sandwich_laws(side, gp);
        long double tv_lm = tv_distance(laws.lower, laws.middle);
        long double tv_mu = tv_distance(laws.middle, laws.upper);
        std::uint64_t runs = scaled(1e5, o.scale), diff_lm = 0, diff_mu = 0;
        std::vector<std::uint8_t> d1(runs), d2(runs);
        parallel_for(runs, [&](std::size_t r) {
            RngStream rng(o.seed, r, Stage::sandwich, 1);
            SandwichTriple t = sandwich_sample(side, gp, rng);
            d1[r] = !(t.lower == t.middle);
            d2[r] = !(t.middle == t.upper);
        });
        for (std::uint64_t r = 0; r < runs; ++r) {
            diff_lm += d1[r];
            diff_mu += d2[r];
        }
        double p1 = double(diff_lm) / runs, p2 = double(diff_mu) / runs;
        double s1 = 3 * std::sqrt(p1 * (1 - p1) / runs) + 1.0 / runs;
        double s2 = 3 * std::sqrt(p2 * (1 - p2) / runs) + 1.0 / runs;
        coupling.passed = p1 + s1 >= tv_lm && p2 + s2 >= tv_mu;
        coupling.detail = {{"side", side},
                           {"runs", runs},
                           {"p_lower_ne_middle", p1},
                           {"tv_lower_middle", double(tv_lm)},
                           {"p_middle_ne_upper", p2},
                           {"tv_middle_upper", double(tv_mu)},
                           {"slack", "3 standard errors + 1/runs"}};
    }
    return {contain, coupling};
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"cluster-expansion", "product-identities",
                                                "oracle-vs-sampler", "sandwich", "formulas"};
    return names;
}

SuiteReport run_suite(const std::string& name, const VerifyOptions& o)
{
    SuiteReport r;
    r.suite = name;
    auto add = [&](auto checks) {
        if constexpr (std::is_same_v<decltype(checks), Check>)
            r.checks.push_back(std::move(checks));
        else
            for (auto& c : checks)
                r.checks.push_back(std::move(c));
    };
    if (name == "cluster-expansion") {
        add(timed(check_ursell_values));
        add(timed(check_penrose_cayley));
        add(timed([&] { return check_truncation(o); }));
    } else if (name == "product-identities") {
        add(timed(check_defect_identity));
        add(timed([&] { return check_product_counts(o); }));
    } else if (name == "oracle-vs-sampler") {
        add(timed(check_exact_counts));
        add(timed([&] { return check_samplers_vs_oracle(o); }));
    } else if (name == "sandwich") {
        add(timed([&] { return check_sandwich(o); }));
    } else if (name == "formulas") {
        add(timed(check_formula_overlap));
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    return r;
}

}  // namespace trifree

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "trifree/analysis.hpp"
#include "trifree/cluster.hpp"
#include "trifree/graph_io.hpp"
#include "trifree/oracle.hpp"
#include "trifree/parallel.hpp"
#include "trifree/params.hpp"
#include "trifree/samplers.hpp"
#include "trifree/verify.hpp"

namespace trifree::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string sci(long double x)
{
    std::ostringstream os;
    os << std::scientific << std::setprecision(17) << double(x);
    return os.str();
}

// stdout unless a path is given; files are replaced atomically
void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty())
        out << text;
    else
        write_file_atomic(path, text);
}

json global_json(const GlobalParams& g)
{
    json j{{"n", double(g.n)},      {"lambda0", double(g.lambda0)}, {"lambda", double(g.lambda)},
           {"q0", double(g.q0)},    {"q1", double(g.q1)},           {"q2", double(g.q2)},
           {"mu", double(g.mu)},    {"psi", double(g.psi)},         {"alpha", double(g.alpha)},
           {"in_regime", g.in_regime}};
    if (g.m)
        j["m"] = double(*g.m);
    return j;
}

json partition_json(const PartitionParams& p)
{
    return {{"variant", variant_name(p.variant)},
            {"n", double(p.n)},
            {"a", double(p.a)},
            {"b", double(p.b)},
            {"lambda", double(p.lambda)},
            {"qA", double(p.qA)},
            {"qB", double(p.qB)},
            {"q", double(p.q)},
            {"qpA", double(p.qpA)},
            {"qpB", double(p.qpB)},
            {"qppA", double(p.qppA)},
            {"qppB", double(p.qppB)},
            {"muA", double(p.muA)},
            {"muB", double(p.muB)},
            {"delta_cap", double(p.delta_cap)},
            {"k_cap", double(p.k_cap)},
            {"M_lambda", double(p.M_lambda)},
            {"weakly_balanced", p.weak},
            {"moderately_balanced", p.moderate},
            {"strongly_balanced", p.strong}};
}

//---------------------------------------------------------------------------//

struct CountArgs {
    int n = 0;
    bool per_m = false, asymptotic = false, force = false;
    std::optional<double> m;
};

int cmd_count(const CountArgs& a, std::ostream& out, std::ostream& err)
{
    if (a.asymptotic) {
        if (!a.m)
            throw UsageError("--asymptotic needs --m");
        double n = a.n, m = *a.m;
        Variant v;
        if (subcritical_valid(n, m)) {
            v = Variant::subcritical;
        } else if (supercritical_valid(n, m)) {
            v = Variant::supercritical;
        } else if (a.force) {
            v = Variant::supercritical;
        } else {
            err << "m is below both count regimes; pass --force to evaluate anyway\n";
            return kRegime;
        }
        real lc = v == Variant::subcritical ? log_count_subcritical(n, m)
                                            : log_count_supercritical(n, m);
        if (!std::isfinite(double(lc))) {
            err << "the count formula is not finite at these parameters\n";
            return kRegime;
        }
        out << "n,m,variant,log_count,log10_count\n";
        out << a.n << "," << std::llround(m) << "," << variant_name(v) << "," << sci(lc) << ","
            << sci(lc / std::log(10.0L)) << "\n";
        return kOk;
    }
    if (a.n > kEnumerateCap)
        throw CapError("exact counting is capped at n <= " + std::to_string(kEnumerateCap) +
                       "; use --asymptotic with --m for larger n");
    if (a.n < 1)
        throw UsageError("--n must be positive");
    CountTable t = enumerate_tfree(a.n);
    if (a.m) {
        auto m = std::size_t(*a.m);
        out << "m,count\n" << m << "," << (m < t.counts.size() ? t.counts[m] : BigInt(0)) << "\n";
    } else if (a.per_m) {
        out << "m,count\n";
        for (std::size_t m = 0; m < t.counts.size(); ++m)
            out << m << "," << t.counts[m] << "\n";
        out << "total," << t.total() << "\n";
    } else {
        out << "n,total\n" << a.n << "," << t.total() << "\n";
    }
    return kOk;
}

//---------------------------------------------------------------------------//

struct ParamsArgs {
    double n = 0;
    std::optional<double> m, lambda, a;
    std::string variant = "supercritical";
    bool force = false;
};

int cmd_params(const ParamsArgs& p, std::ostream& out, std::ostream& err)
{
    if (bool(p.m) == bool(p.lambda))
        throw UsageError("give exactly one of --m and --lambda");
    Variant v = parse_variant(p.variant);
    GlobalParams g = p.m ? global_params_m(p.n, *p.m) : global_params_lambda(p.n, *p.lambda);
    bool ok = p.m ? (v == Variant::subcritical ? subcritical_valid(p.n, *p.m)
                                               : supercritical_valid(p.n, *p.m))
                  : g.in_regime;
    if (!ok && !p.force) {
        err << "parameters outside the " << variant_name(v)
            << " regime; pass --force to print them anyway\n";
        return kRegime;
    }
    double a = p.a ? *p.a : std::floor(p.n / 2);
    json j{{"global", global_json(g)},
           {"partition", partition_json(partition_params(p.n, a, g.lambda, v))},
           {"regime_ok", ok}};
    out << j.dump(2) << "\n";
    return kOk;
}

//---------------------------------------------------------------------------//

struct SampleArgs {
    std::string model;
    int n = 0;
    std::optional<double> m, lambda, q, psi;
    std::optional<int> side;
    std::uint64_t seed = 0, replicas = 1, sweeps = 0;
    std::string out_path;
    bool force = false;
};

int cmd_sample(const SampleArgs& a, std::ostream& out, std::ostream& err)
{
    Model model = parse_model(a.model);
    if (a.n < 1)
        throw UsageError("--n must be positive");
    SamplerOptions o;
    o.sweeps = a.sweeps;
    std::vector<std::string> lines(a.replicas);
    auto regime = [&](bool ok, const char* what) {
        if (!ok && !a.force) {
            err << what << "; pass --force to sample anyway\n";
            return false;
        }
        return true;
    };
    switch (model) {
    case Model::mu_m1:
    case Model::mu_m2: {
        if (!a.m)
            throw UsageError("this model needs --m");
        std::uint64_t m = std::uint64_t(*a.m);
        bool sub = model == Model::mu_m1;
        if (!regime(sub ? subcritical_valid(a.n, m) : supercritical_valid(a.n, m),
                    sub ? "m below the subcritical regime" : "m below the supercritical regime"))
            return kRegime;
        parallel_for(a.replicas, [&](std::size_t r) {
            RngStream rng(a.seed, r);
            SampleOutcome s = sub ? sample_mu_m1(a.n, m, rng, o) : sample_mu_m2(a.n, m, rng, o);
            json j = outcome_to_json(s);
            j["replica"] = r;
            j["seed"] = a.seed;
            lines[r] = j.dump();
        });
        break;
    }
    case Model::mu_lambda1:
    case Model::mu_lambda2: {
        if (!a.lambda)
            throw UsageError("this model needs --lambda");
        long double lambda = *a.lambda;
        if (!regime(lambda == 0 || global_params_lambda(a.n, lambda).in_regime,
                    "lambda outside (0, 2 sqrt(log n / n)]"))
            return kRegime;
        bool one = model == Model::mu_lambda1;
        parallel_for(a.replicas, [&](std::size_t r) {
            RngStream rng(a.seed, r);
            SampleOutcome s = one ? sample_mu_lambda1(a.n, lambda, rng, o)
                                  : sample_mu_lambda2(a.n, lambda, rng, o);
            json j = outcome_to_json(s);
            j["replica"] = r;
            j["seed"] = a.seed;
            lines[r] = j.dump();
        });
        break;
    }
    case Model::cerg: {
        if (!a.q || !a.psi)
            throw UsageError("cerg needs --q and --psi");
        std::uint64_t sweeps = a.sweeps ? a.sweeps : default_sweeps(a.n);
        parallel_for(a.replicas, [&](std::size_t r) {
            RngStream rng(a.seed, r, Stage::chain);
            ChainStats cs;
            Graph g = sample_cond_erg(a.n, *a.q, *a.psi, rng, sweeps, 0, &cs);
            json j{{"model", "cerg"},
                   {"graph", graph_to_json(g)},
                   {"replica", r},
                   {"seed", a.seed},
                   {"diagnostics",
                    {{"chain_proposals", cs.proposals}, {"chain_accepted", cs.accepted}}}};
            lines[r] = j.dump();
        });
        break;
    }
    case Model::sandwich: {
        if (bool(a.m) == bool(a.lambda))
            throw UsageError("sandwich needs exactly one of --m and --lambda");
        GlobalParams gp = a.m ? global_params_m(a.n, *a.m) : global_params_lambda(a.n, *a.lambda);
        int side = a.side ? *a.side : a.n / 2;
        parallel_for(a.replicas, [&](std::size_t r) {
            RngStream rng(a.seed, r, Stage::sandwich);
            json j = sandwich_to_json(sandwich_sample(side, gp, rng));
            j["replica"] = r;
            j["seed"] = a.seed;
            lines[r] = j.dump();
        });
        break;
    }
    }
    std::string text;
    for (const auto& l : lines)
        text += l + "\n";
    emit(a.out_path, text, out);
    return kOk;
}

//---------------------------------------------------------------------------//

struct OracleArgs {
    std::string model;
    int n = 0;
    std::optional<double> m, lambda, q, psi, cap_n;
    std::optional<int> side;
    bool as_json = false;
    std::string out_path;
};

int cmd_oracle(const OracleArgs& a, std::ostream& out, std::ostream&)
{
    Model model = parse_model(a.model);
    json j{{"model", model_name(model)}, {"n", a.n}};
    std::ostringstream csv;
    csv << std::scientific << std::setprecision(17);
    if (model == Model::sandwich) {
        if (bool(a.m) == bool(a.lambda))
            throw UsageError("sandwich needs exactly one of --m and --lambda");
        GlobalParams gp = a.m ? global_params_m(a.n, *a.m) : global_params_lambda(a.n, *a.lambda);
        int side = a.side ? *a.side : std::min(a.n / 2, 6);
        SandwichLaws laws = exact_sandwich_laws(side, gp);
        j["side"] = side;
        csv << "process,graph,prob\n";
        for (auto [name, law] : {std::pair{"lower", &laws.lower}, std::pair{"middle", &laws.middle},
                                 std::pair{"upper", &laws.upper}}) {
            std::vector<std::pair<std::uint64_t, long double>> rows(law->begin(), law->end());
            std::sort(rows.begin(), rows.end());
            json arr = json::array();
            for (auto [mask, p] : rows) {
                arr.push_back({{"graph", mask_key(side, mask)}, {"prob", double(p)}});
                csv << name << ",\"" << mask_key(side, mask) << "\"," << double(p) << "\n";
            }
            j[name] = arr;
        }
    } else {
        ModelArgs args;
        args.n = a.n;
        if (model == Model::mu_m1 || model == Model::mu_m2) {
            if (!a.m)
                throw UsageError("this model needs --m");
            args.m = std::uint64_t(*a.m);
            j["m"] = args.m;
        } else if (model == Model::cerg) {
            if (!a.q || !a.psi)
                throw UsageError("cerg needs --q and --psi");
            args.q = *a.q;
            args.psi = *a.psi;
            args.cap_n = a.cap_n ? *a.cap_n : 0;
            j["q"] = args.q;
            j["psi"] = args.psi;
        } else {
            if (!a.lambda)
                throw UsageError("this model needs --lambda");
            args.lambda = *a.lambda;
            j["lambda"] = *a.lambda;
        }
        ModelPmf law = exact_model_pmf(model, args);
        const ClassTable& labellings = tfree_classes(a.n);
        std::vector<std::pair<std::uint64_t, long double>> rows(law.classes.begin(),
                                                                law.classes.end());
        std::sort(rows.begin(), rows.end());
        json arr = json::array();
        csv << "graph,edges,labellings,class_mass,labelled_prob\n";
        for (auto [mask, p] : rows) {
            std::uint64_t l = labellings.at(mask);
            std::string key = mask_key(a.n, mask);
            int edges = __builtin_popcountll(mask);
            arr.push_back({{"graph", key},
                           {"edges", edges},
                           {"labellings", l},
                           {"class_mass", double(p)},
                           {"labelled_prob", double(p / l)}});
            csv << "\"" << key << "\"," << edges << "," << l << "," << double(p) << ","
                << double(p / l) << "\n";
        }
        j["classes"] = arr;
        j["fallback"] = {{"graph", mask_key(a.n, law.fallback_mask)},
                         {"mass", double(law.fallback_mass)}};
        j["total"] = double(law.total());
        if (law.fallback_mass > 0)
            csv << "fallback \"" << mask_key(a.n, law.fallback_mask) << "\",,1,"
                << double(law.fallback_mass) << "," << double(law.fallback_mass) << "\n";
    }
    emit(a.out_path, a.as_json ? j.dump(2) + "\n" : csv.str(), out);
    return kOk;
}

//---------------------------------------------------------------------------//

struct VerifyArgs {
    std::vector<std::string> suites;
    std::uint64_t seed = 1;
    double scale = 1.0;
    std::string report_path;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> suites = a.suites;
    if (suites.empty() || std::find(suites.begin(), suites.end(), "all") != suites.end())
        suites = suite_names();
    for (const auto& s : suites)
        if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw UsageError("unknown suite: " + s);
    VerifyOptions o{a.seed, a.scale};
    json report{{"seed", a.seed}, {"scale", a.scale}, {"suites", json::array()}};
    bool ok = true;
    for (const auto& s : suites) {
        SuiteReport r = run_suite(s, o);
        ok = ok && r.passed();
        for (const auto& c : r.checks)
            err << (c.passed ? "PASS " : "FAIL ") << s << "/" << c.name << "\n";
        report["suites"].push_back(r.to_json());
    }
    report["passed"] = ok;
    std::string text = report.dump(2) + "\n";
    if (!a.report_path.empty())
        write_file_atomic(a.report_path, text);
    out << text;
    return ok ? kOk : kSuiteFailure;
}

//---------------------------------------------------------------------------//

struct ExperimentArgs {
    std::string config, out_dir;
    bool force = false;
};

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream&)
{
    std::ifstream in(a.config);
    if (!in)
        throw UsageError("cannot read config file: " + a.config);
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
    if (a.force)
        cfg["force"] = true;
    std::string dir = a.out_dir;
    if (dir.empty()) {
        if (!cfg.contains("out") || !cfg["out"].is_string())
            throw UsageError("give --out or an \"out\" key in the config");
        dir = cfg["out"].get<std::string>();
    }
    ExperimentReport r = run_experiment(cfg);
    write_report(r, dir);
    out << json{{"out", dir}, {"replicas", r.replicas.size()}, {"aggregate", r.aggregate}}.dump(2)
        << "\n";
    return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Triangle-free graph counting, sampling and verification", "trifree"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (TRIFREE_THREADS overrides)")
        ->check(CLI::PositiveNumber);

    CountArgs ca;
    auto* count = app.add_subcommand("count", "count triangle-free graphs");
    count->add_option("--n", ca.n, "vertices")->required();
    count->add_flag("--per-m", ca.per_m, "one row per edge count");
    count->add_option("--m", ca.m, "edge count");
    count->add_flag("--asymptotic", ca.asymptotic, "log-count from the asymptotic formulas");
    count->add_flag("--force", ca.force, "evaluate outside the supported regimes");

    ParamsArgs pa;
    auto* params = app.add_subcommand("params", "parameter record");
    params->add_option("--n", pa.n, "vertices")->required();
    params->add_option("--m", pa.m, "edge count");
    params->add_option("--lambda", pa.lambda, "activity");
    params->add_option("--a", pa.a, "size of side A (default floor(n/2))");
    params->add_option("--variant", pa.variant, "subcritical | supercritical");
    params->add_flag("--json", "JSON output (the only format)");
    params->add_flag("--force", pa.force, "print outside the regime");

    SampleArgs sa;
    auto* sample = app.add_subcommand("sample", "draw samples as JSONL");
    sample->add_option("--model", sa.model, "mu_m1|mu_m2|mu_lambda1|mu_lambda2|cerg|sandwich")
        ->required();
    sample->add_option("--n", sa.n, "vertices")->required();
    sample->add_option("--m", sa.m, "edge count");
    sample->add_option("--lambda", sa.lambda, "activity");
    sample->add_option("--q", sa.q, "cerg edge probability");
    sample->add_option("--psi", sa.psi, "cerg path weight");
    sample->add_option("--side", sa.side, "sandwich side size (default n/2)");
    sample->add_option("--seed", sa.seed, "seed")->required();
    sample->add_option("--replicas", sa.replicas, "replicas");
    sample->add_option("--sweeps", sa.sweeps, "ERG chain proposals (0: default)");
    sample->add_option("--out", sa.out_path, "output file (default stdout)");
    sample->add_flag("--force", sa.force, "sample outside the regime");

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "exact laws at small n");
    oracle->add_option("--model", oa.model, "mu_m1|mu_m2|mu_lambda1|mu_lambda2|cerg|sandwich")
        ->required();
    oracle->add_option("--n", oa.n, "vertices")->required();
    oracle->add_option("--m", oa.m, "edge count");
    oracle->add_option("--lambda", oa.lambda, "activity");
    oracle->add_option("--q", oa.q, "cerg edge probability");
    oracle->add_option("--psi", oa.psi, "cerg path weight");
    oracle->add_option("--cap-n", oa.cap_n, "cerg degree-cap vertex count (default n)");
    oracle->add_option("--side", oa.side, "sandwich side size");
    oracle->add_flag("--json", oa.as_json, "JSON instead of CSV");
    oracle->add_option("--out", oa.out_path, "output file (default stdout)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run invariant suites");
    verify->add_option("--suite", va.suites, "suite name or all (repeatable)");
    verify->add_option("--seed", va.seed, "seed");
    verify->add_option("--scale", va.scale, "Monte Carlo size multiplier")
        ->check(CLI::PositiveNumber);
    verify->add_option("--report", va.report_path, "also write the report to this file");

    ExperimentArgs ea;
    auto* experiment = app.add_subcommand("experiment", "run a configured experiment");
    experiment->add_option("--config", ea.config, "JSON config")->required();
    experiment->add_option("--out", ea.out_dir, "output directory");
    experiment->add_flag("--force", ea.force, "run outside the regime");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kUsage;
    }
    if (threads > 0)
        set_thread_count(threads);

    try {
        if (*count)
            return cmd_count(ca, out, err);
        if (*params)
            return cmd_params(pa, out, err);
        if (*sample)
            return cmd_sample(sa, out, err);
        if (*oracle)
            return cmd_oracle(oa, out, err);
        if (*verify)
            return cmd_verify(va, out, err);
        if (*experiment)
            return cmd_experiment(ea, out, err);
    } catch (const UsageError& e) {
        err << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError& e) {
        err << "config: " << e.what() << "\n";
        return kUsage;
    } catch (const CapError& e) {
        err << "cap: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kUsage;
    } catch (const RegimeError& e) {
        err << "regime: " << e.what() << "\n";
        return kRegime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kUsage;
}

}  // namespace trifree::cli

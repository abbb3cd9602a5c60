#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "burr/asymptotics.hpp"
#include "burr/distributions.hpp"
#include "burr/evt.hpp"
#include "burr/expansions.hpp"
#include "burr/records.hpp"

namespace burr::cli {

inline constexpr const char* tool_version = "0.1.0";

using nlohmann::json;

/// Thrown for malformed invocations; maps to exit code 2.
class usage_error : public std::runtime_error {
public:
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when the user asks for --help; carries the help text, exit code 0.
class help_requested : public std::runtime_error {
public:
    explicit help_requested(const std::string& text) : std::runtime_error(text) {}
};

struct RunConfig {
    std::string subcommand;
    Member member = Member::I;
    Params params;
    std::vector<std::string> given_params;
    long long n = 0;
    long long m = 0;
    std::uint64_t seed = 0;
    double p = std::numeric_limits<double>::quiet_NaN();
    double u = std::numeric_limits<double>::quiet_NaN();
    double x = std::numeric_limits<double>::quiet_NaN();
    double lambda = 2.0;
    double significance = 0.05;
    Variant variant = Variant::canonical;
    std::string format = "json";
    std::string out_path;
    int threads = 1;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline json params_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& name : used_params(cfg.member))
        j[name] = param_field(cfg.params, name);
    return j;
}

inline json config_json(const RunConfig& cfg) {
    json j;
    j["subcommand"] = cfg.subcommand;
    j["member"] = std::string(member_name(cfg.member));
    j["params"] = params_json(cfg);
    j["format"] = cfg.format;
    if (cfg.n > 0) j["n"] = cfg.n;
    if (cfg.m > 0) j["m"] = cfg.m;
    if (!std::isnan(cfg.p)) j["p"] = cfg.p;
    if (!std::isnan(cfg.u)) j["u"] = cfg.u;
    if (!std::isnan(cfg.x)) j["x"] = cfg.x;
    if (cfg.subcommand == "classify") j["lambda"] = cfg.lambda;
    if (cfg.subcommand == "test") j["significance"] = cfg.significance;
    if (cfg.subcommand == "experiment" || cfg.subcommand == "test")
        j["variant"] = cfg.variant == Variant::canonical ? "canonical" : "alternative";
    // --threads is deliberately not echoed: output bytes are contractually
    // identical for any worker count
    j["seed"] = cfg.seed;
    return j;
}

inline json document_skeleton(const RunConfig& cfg) {
    json doc;
    doc["tool_version"] = tool_version;
    doc["seed"] = cfg.seed;
    doc["config"] = config_json(cfg);
    return doc;
}

inline json finite_or_string(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

} // namespace detail

/// Parse an argv-style vector (without the program name).  Throws
/// usage_error on malformed input; exit-code mapping happens in main_impl.
inline RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;

    CLI::App app{"burr: Burr-family distributions, extreme-quantile expansions, "
                 "record-value simulation and asymptotic record laws"};
    app.require_subcommand(1);

    std::string member_name_arg;
    std::vector<std::string> param_args;
    std::string variant_arg = "canonical";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--member", member_name_arg, "family member (I..XII, Xa, SinghMaddala, Dagum, ToppLeoneDagum; case-insensitive)")
            ->required();
        sub->add_option("--param", param_args, "parameter assignment key=value (repeatable)");
        sub->add_option("--format", cfg.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", cfg.out_path, "write the document to this path instead of stdout");
        sub->add_option("--seed", cfg.seed, "random seed (64-bit)");
    };

    auto* q = app.add_subcommand("quantile", "evaluate the quantile function. "
                                 "Example: burr quantile --member I --p 0.3");
    add_common(q);
    q->add_option("--p", cfg.p, "probability level in (0,1)")->required();

    auto* c = app.add_subcommand("cdf", "evaluate the distribution function. "
                                 "Example: burr cdf --member XII --param r=2 --param c=1 --x 1.0");
    add_common(c);
    c->add_option("--x", cfg.x, "evaluation point")->required();

    auto* e = app.add_subcommand("expand", "second-order extreme-quantile expansion at level u. "
                                 "Example: burr expand --member XII --param r=2 --param c=1 --u 1e-4");
    add_common(e);
    e->add_option("--u", cfg.u, "upper-tail level in (0, 0.1)")->required();

    auto* cl = app.add_subcommand("classify", "extreme-value domain classification with numeric probes. "
                                  "Example: burr classify --member IV --param c=0.5 --param r=1");
    add_common(cl);
    cl->add_option("--lambda", cfg.lambda, "probe ratio parameter (default 2)");

    auto* rc = app.add_subcommand("records", "simulate n-th record values via the partial-sum representation. "
                                  "Example: burr records --member II --param r=1 --n 100 --m 10 --seed 7 --format csv");
    add_common(rc);
    rc->add_option("--n", cfg.n, "record index")->required();
    rc->add_option("--m", cfg.m, "number of replications")->required();

    auto* ex = app.add_subcommand("experiment", "Monte Carlo verification of the record limit law. "
                                  "Example: burr experiment --member II --param r=1 --n 1000 --m 5000 --seed 42");
    add_common(ex);
    ex->add_option("--n", cfg.n, "record index")->required();
    ex->add_option("--m", cfg.m, "number of replications")->required();
    ex->add_option("--variant", variant_arg, "statistic variant: canonical or alternative")
        ->check(CLI::IsMember({"canonical", "alternative"}));
    ex->add_option("--threads", cfg.threads, "worker threads (output is thread-count independent)")
        ->check(CLI::PositiveNumber);

    auto* t = app.add_subcommand("test", "record-value hypothesis test at the given significance. "
                                 "Example: burr test --member X --param r=1 --n 1000 --x 31.6");
    add_common(t);
    t->add_option("--n", cfg.n, "record index")->required();
    t->add_option("--x", cfg.x, "observed record value")->required();
    t->add_option("--significance", cfg.significance, "test level (default 0.05)");
    t->add_option("--variant", variant_arg, "statistic variant: canonical or alternative")
        ->check(CLI::IsMember({"canonical", "alternative"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) {
            std::ostringstream oss;
            app.exit(err, oss, oss);
            throw help_requested(oss.str());
        }
        throw usage_error(err.what());
    }

    for (auto* sub : {q, c, e, cl, rc, ex, t})
        if (sub->parsed()) cfg.subcommand = sub->get_name();

    const auto parsed_member = parse_member(member_name_arg);
    if (!parsed_member) throw usage_error("unknown member name: " + member_name_arg);
    cfg.member = *parsed_member;
    cfg.variant = variant_arg == "alternative" ? Variant::alternative : Variant::canonical;

    const auto required = used_params(cfg.member);
    for (const auto& kv : param_args) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw usage_error("--param expects key=value, got: " + kv);
        const std::string key = kv.substr(0, eq);
        if (std::find(required.begin(), required.end(), key) == required.end())
            throw usage_error("unknown parameter '" + key + "' for member " +
                              std::string(member_name(cfg.member)));
        double value;
        try {
            std::size_t pos = 0;
            value = std::stod(kv.substr(eq + 1), &pos);
            if (pos != kv.size() - eq - 1) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw usage_error("cannot parse numeric value in --param " + kv);
        }
        set_param_field(cfg.params, key, value);
        cfg.given_params.push_back(key);
    }
    std::vector<std::string> missing;
    for (const auto& name : required)
        if (std::find(cfg.given_params.begin(), cfg.given_params.end(), name) ==
            cfg.given_params.end())
            missing.push_back(name);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i)
            list += (i ? ", " : "") + missing[i];
        throw usage_error("member " + std::string(member_name(cfg.member)) +
                          " requires --param for: " + list);
    }
    try {
        validate_params(cfg.member, cfg.params);
    } catch (const parameter_error& err) {
        throw usage_error(err.what());
    }
    return cfg;
}

namespace detail {

inline void emit(const RunConfig& cfg, const std::string& body, std::ostream& os) {
    if (!cfg.out_path.empty()) {
        std::ofstream file(cfg.out_path, std::ios::binary);
        if (!file) throw numeric_error("cannot open output path: " + cfg.out_path);
        file << body;
        return;
    }
    os << body;
}

inline int run_scalar(const RunConfig& cfg, std::ostream& os) {
    Distribution dist(cfg.member, cfg.params);
    double value;
    if (cfg.subcommand == "quantile")
        value = dist.quantile(cfg.p);
    else
        value = dist.cdf(cfg.x);
    if (cfg.format == "csv") {
        std::string body = cfg.subcommand == "quantile" ? "p,value\n" : "x,value\n";
        body += fmt_double(cfg.subcommand == "quantile" ? cfg.p : cfg.x) + "," +
                fmt_double(value) + "\n";
        emit(cfg, body, os);
        return 0;
    }
    json doc = document_skeleton(cfg);
    doc["value"] = value;
    emit(cfg, doc.dump() + "\n", os);
    return 0;
}

inline int run_expand(const RunConfig& cfg, std::ostream& os) {
    Distribution dist(cfg.member, cfg.params);
    const ExpansionResult res = expand_quantile(dist, cfg.u);
    const double rem = remainder(dist, cfg.u);
    const long double w = -std::log(static_cast<long double>(cfg.u));
    const double exact = static_cast<double>(res.frame == Frame::upper_endpoint_gap
                                                 ? dist.tail_gap_ld(w)
                                                 : dist.tail_value_ld(w));
    const char* frame = res.frame == Frame::upper_endpoint_gap ? "upper-endpoint-gap" : "direct";
    const char* kind = nullptr;
    switch (res.remainder_spec.kind) {
        case RemainderKind::power_of_u: kind = "power-of-u"; break;
        case RemainderKind::power_of_log_reciprocal: kind = "power-of-log-reciprocal"; break;
        case RemainderKind::power_of_loglog_reciprocal: kind = "power-of-loglog-reciprocal"; break;
        case RemainderKind::power_of_u_over_log: kind = "power-of-u-over-log"; break;
    }
    if (cfg.format == "csv") {
        std::string body = "u,leading,correction,value,exact,remainder\n";
        body += fmt_double(res.u) + "," + fmt_double(res.leading) + "," +
                fmt_double(res.correction) + "," + fmt_double(res.value) + "," +
                fmt_double(exact) + "," + fmt_double(rem) + "\n";
        emit(cfg, body, os);
        return 0;
    }
    json doc = document_skeleton(cfg);
    doc["u"] = res.u;
    doc["frame"] = frame;
    doc["leading"] = res.leading;
    doc["correction"] = res.correction;
    doc["value"] = res.value;
    doc["exact"] = exact;
    doc["remainder"] = rem;
    doc["remainder_kind"] = kind;
    doc["remainder_exponent"] = res.remainder_spec.exponent;
    doc["remainder_relative"] = res.remainder_spec.relative;
    doc["remainder_exact"] = res.remainder_spec.exact;
    if (cfg.member == Member::XI) {
        const XiConstants xc = fit_xi_constants(cfg.params.r);
        doc["xi_constants"] = {{"alpha_fitted", xc.alpha},
                               {"beta_fitted", xc.beta},
                               {"alpha_candidate_a", xc.alpha_candidate_a},
                               {"alpha_candidate_b", xc.alpha_candidate_b},
                               {"beta_candidate_a", xc.beta_candidate_a},
                               {"beta_candidate_b", xc.beta_candidate_b}};
    }
    emit(cfg, doc.dump() + "\n", os);
    return 0;
}

inline int run_classify(const RunConfig& cfg, std::ostream& os) {
    Distribution dist(cfg.member, cfg.params);
    const DomainClass dc = classify(dist);
    const std::vector<double> grid = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const ProbeResult probe = probe_gamma(dist, cfg.lambda, grid);
    const char* kind = nullptr;
    switch (probe.kind) {
        case ProbeKind::heavy_tail_ratio: kind = "heavy-tail-ratio"; break;
        case ProbeKind::endpoint_gap_ratio: kind = "endpoint-gap-ratio"; break;
        case ProbeKind::log_transform_ratio: kind = "log-transform-ratio"; break;
        case ProbeKind::slow_variation_double_ratio: kind = "slow-variation-double-ratio"; break;
    }
    if (cfg.format == "csv") {
        std::string body = "u,estimate\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
            body += fmt_double(grid[i]) + "," + fmt_double(probe.estimates[i]) + "\n";
        emit(cfg, body, os);
        return 0;
    }
    json doc = document_skeleton(cfg);
    doc["member"] = std::string(member_name(cfg.member));
    doc["params"] = params_json(cfg);
    doc["gamma"] = dc.gamma;
    doc["uep"] = finite_or_string(dc.uep);
    doc["transform"] = dc.transform == Transform::log_scale ? "log" : "none";
    doc["probe_kind"] = kind;
    doc["probe_reference"] = probe.reference;
    json probes = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i)
        probes.push_back({{"u", grid[i]}, {"estimate", probe.estimates[i]}});
    doc["probe_estimates"] = probes;
    emit(cfg, doc.dump() + "\n", os);
    return 0;
}

inline int run_records(const RunConfig& cfg, std::ostream& os) {
    Distribution dist(cfg.member, cfg.params);
    if (cfg.n < 1) throw domain_error("records: n must be >= 1");
    if (cfg.m < 1) throw domain_error("records: m must be >= 1");
    std::vector<RecordDraw> draws;
    draws.reserve(static_cast<std::size_t>(cfg.m));
    for (long long rep = 0; rep < cfg.m; ++rep) {
        RandomStream stream =
            RandomStream::for_replication(cfg.seed, static_cast<std::uint64_t>(rep));
        draws.push_back(simulate_record(dist, cfg.n, stream));
    }
    if (cfg.format == "csv") {
        std::string body = "replication,n,s_n,s_star,value,value_is_log\n";
        for (long long rep = 0; rep < cfg.m; ++rep) {
            const auto& d = draws[static_cast<std::size_t>(rep)];
            body += std::to_string(rep) + "," + std::to_string(d.n) + "," + fmt_double(d.s_n) +
                    "," + fmt_double(d.s_star) + "," + fmt_double(d.value) + "," +
                    (d.value_log_scale ? "1" : "0") + "\n";
        }
        emit(cfg, body, os);
        return 0;
    }
    json doc = document_skeleton(cfg);
    json rows = json::array();
    for (long long rep = 0; rep < cfg.m; ++rep) {
        const auto& d = draws[static_cast<std::size_t>(rep)];
        rows.push_back({{"replication", rep},
                        {"n", d.n},
                        {"s_n", d.s_n},
                        {"s_star", d.s_star},
                        {"value", d.value},
                        {"value_is_log", d.value_log_scale}});
    }
    doc["draws"] = rows;
    emit(cfg, doc.dump() + "\n", os);
    return 0;
}

inline int run_experiment_cmd(const RunConfig& cfg, std::ostream& os) {
    Distribution dist(cfg.member, cfg.params);
    const ExperimentReport rep =
        run_experiment(dist, cfg.n, cfg.m, cfg.seed, cfg.variant, cfg.threads);
    if (cfg.format == "csv") {
        std::string body = "replication,statistic\n";
        for (std::size_t i = 0; i < rep.statistics.size(); ++i)
            body += std::to_string(i) + "," + fmt_double(rep.statistics[i]) + "\n";
        emit(cfg, body, os);
        return 0;
    }
    json doc = document_skeleton(cfg);
    doc["n"] = rep.n;
    doc["m"] = rep.m;
    doc["variant"] = rep.variant == Variant::canonical ? "canonical" : "alternative";
    doc["target"] = {{"shape", rep.target.shape == LawShape::normal
                                   ? "normal"
                                   : "log-of-variable-is-normal"},
                     {"mean", rep.target.mean},
                     {"variance", rep.target.variance}};
    doc["ks_distance"] = rep.ks_distance;
    doc["ks_pvalue"] = rep.ks_pvalue;
    doc["sample_mean"] = rep.sample_mean;
    doc["sample_variance"] = rep.sample_variance;
    doc["failed_replications"] = rep.failed_replications;
    doc["warning_excess_failures"] = rep.warning_excess_failures;
    doc["statistics"] = rep.statistics;
    emit(cfg, doc.dump() + "\n", os);
    return 0;
}

inline int run_test_cmd(const RunConfig& cfg, std::ostream& os) {
    Distribution dist(cfg.member, cfg.params);
    const HypothesisTestResult res =
        record_hypothesis_test(dist, cfg.n, cfg.x, cfg.significance, cfg.variant);
    if (cfg.format == "csv") {
        std::string body = "statistic,z,pvalue,reject,support_violation\n";
        body += fmt_double(res.statistic) + "," + fmt_double(res.z) + "," +
                fmt_double(res.pvalue) + "," + (res.reject ? "1" : "0") + "," +
                (res.support_violation ? "1" : "0") + "\n";
        emit(cfg, body, os);
        return 0;
    }
    json doc = document_skeleton(cfg);
    doc["statistic"] = finite_or_string(res.statistic);
    doc["z"] = finite_or_string(res.z);
    doc["pvalue"] = res.pvalue;
    doc["reject"] = res.reject;
    if (res.support_violation) doc["flag"] = "support-violation";
    doc["support_violation"] = res.support_violation;
    emit(cfg, doc.dump() + "\n", os);
    return 0;
}

} // namespace detail

/// Dispatch a validated config; returns the process exit code.
inline int run(const RunConfig& cfg, std::ostream& os) {
    try {
        if (cfg.subcommand == "quantile" || cfg.subcommand == "cdf")
            return detail::run_scalar(cfg, os);
        if (cfg.subcommand == "expand") return detail::run_expand(cfg, os);
        if (cfg.subcommand == "classify") return detail::run_classify(cfg, os);
        if (cfg.subcommand == "records") return detail::run_records(cfg, os);
        if (cfg.subcommand == "experiment") return detail::run_experiment_cmd(cfg, os);
        if (cfg.subcommand == "test") return detail::run_test_cmd(cfg, os);
        throw usage_error("unknown subcommand: " + cfg.subcommand);
    } catch (const usage_error&) {
        throw;
    } catch (const std::exception& err) {
        json doc;
        doc["error"] = err.what();
        doc["context"] = detail::config_json(cfg);
        os << doc.dump() << "\n";
        return 1;
    }
}

inline int main_impl(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const help_requested& help) {
        std::cout << help.what();
        return 0;
    } catch (const usage_error& err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return 2;
    }
    return run(cfg, std::cout);
}

} // namespace burr::cli

#include "netdyn/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "netdyn/backbone.hpp"
#include "netdyn/error.hpp"
#include "netdyn/estimator.hpp"
#include "netdyn/gof.hpp"
#include "netdyn/ingest.hpp"
#include "netdyn/io.hpp"
#include "netdyn/parallel.hpp"
#include "netdyn/synth.hpp"

namespace netdyn::cli {

namespace fs = std::filesystem;

namespace {

// Shared view of a configuration: resolved inputs, directories, provenance.
struct Pipeline {
    const RunConfig& cfg;
    fs::path out;
    std::uint64_t seed;
    std::uint64_t config_hash;

    explicit Pipeline(const RunConfig& c)
        : cfg(c), out(c.path_or("out", "out")), seed(c.get_u64("seed", 1)), config_hash(c.hash()) {}

    std::string provenance() const { return fmt::format("netdyn config_hash={:016x} seed={}", config_hash, seed); }

    YearRange years() const {
        YearRange y{cfg.require_int("year_min"), cfg.require_int("year_max")};
        if (y.last < y.first) throw ConfigError("year_max precedes year_min");
        return y;
    }
    std::vector<int> year_list() const {
        std::vector<int> out;
        for (int y = years().first; y <= years().last; ++y) out.push_back(y);
        return out;
    }
    ActorSet actors() const { return io::read_actor_set(cfg.existing_path("actors")); }
    std::vector<Domain> domains() const {
        std::vector<Domain> out;
        for (const auto& d : cfg.get_list("domains", {"S&T", "SocSci", "A&H"})) out.push_back(parse_domain(d));
        return out;
    }
    fs::path weighted_dir() const { return cfg.path_or("weighted_dir", out / "weighted"); }
    fs::path backbone_dir() const { return cfg.path_or("backbone_dir", out / "backbone"); }
    fs::path estimate_dir() const { return cfg.path_or("estimate_dir", out / "estimate"); }
    fs::path gof_dir() const { return out / "gof"; }
    fs::path export_dir() const { return out / "export"; }

    static std::string wave_file(Domain d, int year) { return fmt::format("{}_{}.csv", domain_tag(d), year); }

    BinaryNetSeries backbone_series(Domain d, const ActorSet& actors) const {
        BinaryNetSeries s;
        for (int y : year_list()) {
            const auto path = backbone_dir() / wave_file(d, y);
            if (!fs::exists(path)) throw ConfigError("backbone wave not found: " + path.string() + " (run the backbone stage)");
            s.push_back(io::read_binary_edgelist(path, actors, y));
        }
        return s;
    }

    /// "path" or "path log1p"
    std::pair<fs::path, Transform> covariate_source(const std::string& key) const {
        auto value = cfg.require(key);
        auto transform = Transform::none;
        std::istringstream in(value);
        std::string path, flag;
        in >> path >> flag;
        if (flag == "log1p") transform = Transform::log1p;
        else if (!flag.empty()) throw ConfigError(key + ": unknown transform \"" + flag + "\"");
        fs::path p(path);
        if (p.is_relative() && !cfg.base_dir().empty()) p = cfg.base_dir() / p;
        if (!fs::exists(p)) throw ConfigError(key + ": file not found: " + p.string());
        return {p, transform};
    }

    CovariateSet covariates(const ActorSet& actors, bool raw) const {
        CovariateSet covs;
        for (const auto& [name, value] : cfg.with_prefix("covariate.")) {
            auto [path, transform] = covariate_source("covariate." + name);
            covs.actor.push_back(io::read_actor_covariate(path, name, actors, year_list(), raw ? Transform::none : transform));
        }
        for (const auto& [name, value] : cfg.with_prefix("dyadic.")) {
            auto [path, transform] = covariate_source("dyadic." + name);
            covs.dyad.push_back(io::read_dyad_covariate(path, name, actors, raw ? Transform::none : transform));
        }
        return covs;
    }

    std::vector<EffectSpec> effects() const {
        std::vector<EffectSpec> out;
        const double decay = cfg.get_double("gwesp_decay", default_gwesp_decay);
        for (const auto& item : cfg.get_list("effects", {"density"})) {
            auto e = parse_effect_spec(item);
            e.gwesp_decay = decay;
            out.push_back(std::move(e));
        }
        return out;
    }

    EstimationOptions options() const {
        EstimationOptions o;
        o.n1 = cfg.get_int("n1", o.n1);
        o.subphases = cfg.get_int("subphases", o.subphases);
        o.n3 = cfg.get_int("n3", o.n3);
        o.gain = cfg.get_double("gain", o.gain);
        o.max_convergence_ratio = cfg.get_double("tmax", o.max_convergence_ratio);
        o.fd_step = cfg.get_double("fd_step", o.fd_step);
        o.subphase_cap = cfg.get_int("subphase_cap", o.subphase_cap);
        o.retain_draws = cfg.get_bool("retain_draws", o.retain_draws);
        o.retain_all_periods = cfg.get_bool("retain_all_periods", o.retain_all_periods);
        o.seed = seed;
        o.validate();
        return o;
    }

    double alpha() const {
        const double a = cfg.get_double("alpha", default_alpha_level);
        if (!(a > 0.0 && a <= 1.0)) throw ConfigError("alpha must lie in (0, 1], got " + cfg.require("alpha"));
        return a;
    }
};

std::string describe_csv(const std::vector<std::pair<Domain, std::vector<DescribeRow>>>& tables, std::string_view prov) {
    std::string out = fmt::format("# {}\ndomain,year,nodes,edges,density,isolates\n", prov);
    for (const auto& [d, rows] : tables)
        for (const auto& r : rows)
            out += fmt::format("{},{},{},{},{:.6f},{}\n", domain_label(d), r.year, r.nodes, r.edges, r.density, r.isolates);
    return out;
}

// Columns: year, nodes, edges per domain, density per domain.
std::string describe_text(const std::vector<std::pair<Domain, std::vector<DescribeRow>>>& tables, std::string_view prov) {
    std::string out = fmt::format("# {}\n{:<6} {:>6}", prov, "Year", "Nodes");
    for (const auto& [d, rows] : tables) out += fmt::format(" {:>8}", fmt::format("E:{}", domain_label(d)));
    for (const auto& [d, rows] : tables) out += fmt::format(" {:>10}", fmt::format("D:{}", domain_label(d)));
    out += "\n";
    if (tables.empty()) return out;
    for (std::size_t r = 0; r < tables.front().second.size(); ++r) {
        const auto& first = tables.front().second[r];
        out += fmt::format("{:<6} {:>6}", first.year, first.nodes);
        for (const auto& [d, rows] : tables) out += fmt::format(" {:>8}", rows[r].edges);
        for (const auto& [d, rows] : tables) out += fmt::format(" {:>10.3f}", rows[r].density);
        out += "\n";
    }
    return out;
}

void apply_threads(const RunConfig& cfg) {
    const int t = cfg.get_int("threads", 0);
    if (t < 0) throw ConfigError("threads must be nonnegative");
    thread_cap().store(static_cast<unsigned>(t));
}

}  // namespace

// ---------------------------------------------------------------------------

void cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    Pipeline p(cfg);
    const auto actors = p.actors();
    std::optional<UnmatchedPolicy> policy;
    if (auto v = cfg.get("unmatched_policy")) {
        if (*v == "drop") policy = UnmatchedPolicy::drop;
        else if (*v == "error") policy = UnmatchedPolicy::error;
        else throw ConfigError("unmatched_policy must be drop or error");
    }
    auto dict = io::read_dictionary(cfg.existing_path("dictionary"), actors);
    if (policy) dict.set_policy(*policy);
    const auto records = io::read_records(cfg.existing_path("records"));
    CoauthorshipTally tally(dict, p.years());
    for (const auto& r : records) tally.add(r);

    std::vector<std::pair<Domain, std::vector<DescribeRow>>> tables;
    std::size_t files = 0;
    for (auto d : p.domains()) {
        const auto series = tally.series(d);
        for (const auto& net : series) {
            io::write_text(p.weighted_dir() / Pipeline::wave_file(d, net.year()), io::weighted_edgelist(net, p.provenance()));
            ++files;
        }
        tables.emplace_back(d, describe(series));
    }
    io::write_text(p.weighted_dir() / "describe.csv", describe_csv(tables, p.provenance()));
    io::write_text(p.weighted_dir() / "describe.txt", describe_text(tables, p.provenance()));
    io::write_text(p.weighted_dir() / "ingest_summary.txt",
                   fmt::format("# {}\nrecords {}\nskipped_out_of_range {}\n", p.provenance(), tally.records_seen(),
                               tally.skipped_out_of_range()));
    log << fmt::format("ingest: {} records ({} outside {}-{}), {} weighted edge lists in {}\n", tally.records_seen(),
                       tally.skipped_out_of_range(), p.years().first, p.years().last, files, p.weighted_dir().string());
}

void cmd_backbone(const RunConfig& cfg, std::ostream& log) {
    Pipeline p(cfg);
    const auto actors = p.actors();
    const double alpha = p.alpha();
    std::vector<double> sweep;
    for (const auto& s : cfg.get_list("alpha_sweep")) {
        RunConfig tmp;
        tmp.set("a", s);
        const double a = tmp.get_double("a", 0);
        if (!(a > 0.0 && a <= 1.0)) throw ConfigError("alpha_sweep values must lie in (0, 1]");
        sweep.push_back(a);
    }
    const bool with_scores = cfg.get_bool("backbone_scores", false);

    std::string trimming = fmt::format("# {}\ndomain,year,positive_edges,retained_edges,trimming_fraction,isolates,isolate_share\n", p.provenance());
    std::string trimming_txt = fmt::format("# {}\n{:<12} {:<6} {:>9} {:>9} {:>9} {:>9}\n", p.provenance(), "Domain",
                                           "Year", "Positive", "Retained", "Trimmed", "Isolated");
    std::string sweep_csv = fmt::format("# {}\ndomain,year,alpha,retained_edges,trimming_fraction\n", p.provenance());
    std::vector<std::pair<Domain, std::vector<DescribeRow>>> tables;
    for (auto d : p.domains()) {
        BinaryNetSeries series;
        for (int y : p.year_list()) {
            const auto src = p.weighted_dir() / Pipeline::wave_file(d, y);
            if (!fs::exists(src)) throw ConfigError("weighted wave not found: " + src.string() + " (run the ingest stage)");
            const auto w = io::read_weighted_edgelist(src, actors, y);
            const auto scores = disparity_scores(w);
            const auto bb = extract_backbone(w, scores, alpha);
            io::write_text(p.backbone_dir() / Pipeline::wave_file(d, y),
                           io::binary_edgelist(bb.net, p.provenance(), with_scores ? &scores : nullptr));
            const int iso = isolate_count(bb.net);
            const double share = static_cast<double>(iso) / actors.size();
            trimming += fmt::format("{},{},{},{},{:.6f},{},{:.6f}\n", domain_label(d), y, bb.positive_edges,
                                    bb.retained_edges, bb.trimming_fraction(), iso, share);
            trimming_txt += fmt::format("{:<12} {:<6} {:>9} {:>9} {:>8.1f}% {:>8.1f}%\n", domain_label(d), y,
                                        bb.positive_edges, bb.retained_edges, 100.0 * bb.trimming_fraction(), 100.0 * share);
            for (double a : sweep) {
                const auto s = extract_backbone(w, scores, a);
                sweep_csv += fmt::format("{},{},{},{},{:.6f}\n", domain_label(d), y, io::format_double(a),
                                         s.retained_edges, s.trimming_fraction());
            }
            series.push_back(bb.net);
        }
        tables.emplace_back(d, describe(series));
    }
    io::write_text(p.backbone_dir() / "trimming.csv", trimming);
    io::write_text(p.backbone_dir() / "trimming.txt", trimming_txt);
    io::write_text(p.backbone_dir() / "describe.csv", describe_csv(tables, p.provenance()));
    io::write_text(p.backbone_dir() / "describe.txt", describe_text(tables, p.provenance()));
    if (!sweep.empty()) io::write_text(p.backbone_dir() / "alpha_sweep.csv", sweep_csv);
    log << fmt::format("backbone: alpha {} over {} domain(s), output in {}\n", io::format_double(alpha),
                       p.domains().size(), p.backbone_dir().string());
}

void cmd_estimate(const RunConfig& cfg, std::ostream& log) {
    Pipeline p(cfg);
    const auto actors = p.actors();
    const auto covs = p.covariates(actors, false);
    const auto effects = p.effects();
    const auto options = p.options();
    const auto rule = parse_tie_rule(cfg.get_or("tie_rule", "forcing"));

    std::vector<std::pair<Domain, EstimationResult>> results;
    for (auto d : p.domains()) {
        MomentProblem problem(p.backbone_series(d, actors), effects, covs, rule);
        auto result = estimate(problem, options);
        const auto dir = p.estimate_dir() / std::string(domain_tag(d));
        io::write_text(dir / "result.json", io::result_json(result, domain_label(d), p.config_hash, actors.labels()));
        if (options.retain_draws) io::write_text(dir / "draws.csv", io::draws_csv(result, actors, p.provenance()));
        log << fmt::format("estimate {}: convergence ratio {:.4f}, {} iteration steps\n", domain_label(d),
                           result.max_convergence_ratio, result.iteration_steps());
        for (const auto& w : result.warnings) log << "  warning: " << w << "\n";
        results.emplace_back(d, std::move(result));
    }

    // One column per domain, SEs in parentheses under each estimate.
    std::string txt = fmt::format("# {}\n{:<28}", p.provenance(), "Parameter");
    for (const auto& [d, r] : results) txt += fmt::format(" {:>14}", domain_label(d));
    txt += "\n";
    auto cell_pair = [](double est, double se) -> std::pair<std::string, std::string> {
        std::string stars;
        if (se > 0.0) stars = significance_stars(two_sided_p(est, se));
        return {fmt::format("{:.4f}{}", est, stars), fmt::format("({:.4f})", se)};
    };
    std::string csv = fmt::format("# {}\ndomain,parameter,estimate,se,z,p,stars,t_ratio\n", p.provenance());
    for (std::size_t k = 0; k < effects.size(); ++k) {
        std::string est_line = fmt::format("{:<28}", effects[k].label()), se_line = fmt::format("{:<28}", "");
        for (const auto& [d, r] : results) {
            const int kk = static_cast<int>(k);
            auto [e, s] = cell_pair(r.beta(kk), r.beta_se(kk));
            est_line += fmt::format(" {:>14}", e);
            se_line += fmt::format(" {:>14}", s);
            const double se = r.beta_se(kk);
            const bool testable = se > 0.0;
            const double pv = testable ? two_sided_p(r.beta(kk), se) : 1.0;
            csv += fmt::format("{},{},{},{},{},{},{},{}\n", domain_label(d), effects[k].label(), io::format_double(r.beta(kk)),
                               io::format_double(se), testable ? io::format_double(r.beta(kk) / se) : "NA",
                               testable ? io::format_double(pv) : "NA", testable ? significance_stars(pv) : "",
                               io::format_double(r.t_ratios(r.periods + kk)));
        }
        txt += est_line + "\n" + se_line + "\n";
    }
    const int max_periods = results.empty() ? 0 : results.front().second.periods;
    for (int m = 0; m < max_periods; ++m) {
        std::string est_line = fmt::format("{:<28}", fmt::format("Rate period {}", m + 1)), se_line = fmt::format("{:<28}", "");
        for (const auto& [d, r] : results) {
            est_line += fmt::format(" {:>14}", fmt::format("{:.4f}", r.rate(m)));
            se_line += fmt::format(" {:>14}", fmt::format("({:.4f})", r.se(m)));
            csv += fmt::format("{},rate {},{},{},,,,{}\n", domain_label(d), m + 1, io::format_double(r.rate(m)),
                               io::format_double(r.se(m)), io::format_double(r.t_ratios(m)));
        }
        txt += est_line + "\n" + se_line + "\n";
    }
    std::string conv = fmt::format("# {}\ndomain,convergence_ratio,iteration_steps,covariance_ridge\n", p.provenance());
    std::string ratio_line = fmt::format("{:<28}", "Convergence Ratio"), steps_line = fmt::format("{:<28}", "Iteration Steps");
    for (const auto& [d, r] : results) {
        ratio_line += fmt::format(" {:>14}", fmt::format("{:.4f}", r.max_convergence_ratio));
        steps_line += fmt::format(" {:>14}", r.iteration_steps());
        conv += fmt::format("{},{},{},{}\n", domain_label(d), io::format_double(r.max_convergence_ratio),
                            r.iteration_steps(), r.covariance_ridge ? "true" : "false");
    }
    txt += ratio_line + "\n" + steps_line + "\n";
    txt += "Note: standard errors in parentheses. *p < 0.05, **p < 0.01, ***p < 0.001 (two-sided normal).\n";
    io::write_text(p.estimate_dir() / "report.txt", txt);
    io::write_text(p.estimate_dir() / "report.csv", csv);
    io::write_text(p.estimate_dir() / "convergence.csv", conv);
    log << "estimate: report in " << (p.estimate_dir() / "report.txt").string() << "\n";
}

void cmd_gof(const RunConfig& cfg, std::ostream& log) {
    Pipeline p(cfg);
    const auto actors = p.actors();
    GofOptions go;
    go.max_degree = cfg.get_int("gof_max_degree", go.max_degree);
    go.period = cfg.get_int("gof_period", 0) - 1;
    std::string summary = fmt::format("# {}\ndomain,auxiliary,p_value,observed_distance,draws,rank\n", p.provenance());
    for (auto d : p.domains()) {
        const auto dir = p.estimate_dir() / std::string(domain_tag(d));
        auto result = io::read_result_json(dir / "result.json");
        if (result.draws.empty() || !fs::exists(dir / "draws.csv"))
            throw InsufficientDrawsError("no simulation draws stored for " + std::string(domain_label(d)) +
                                         "; rerun the estimate stage with retain_draws = true");
        io::read_draws_csv(dir / "draws.csv", actors, result);
        const auto panel = p.backbone_series(d, actors);
        for (auto kind : {AuxKind::degree_distribution, AuxKind::triad_census}) {
            const auto a = gof_test(result, panel, kind, go);
            std::string out = fmt::format("# {}\ndimension,observed,q05,q50,q95\n", p.provenance());
            for (Eigen::Index c = 0; c < a.observed.size(); ++c)
                out += fmt::format("{},{},{},{},{}\n", a.dimensions[static_cast<std::size_t>(c)], io::format_double(a.observed(c)),
                                   io::format_double(a.q05(c)), io::format_double(a.q50(c)), io::format_double(a.q95(c)));
            out += fmt::format("# p_value={} observed_distance={} draws={}\n", io::format_double(a.p),
                               io::format_double(a.observed_distance), a.simulated.rows());
            io::write_text(p.gof_dir() / fmt::format("{}_{}.csv", domain_tag(d), aux_name(kind)), out);
            summary += fmt::format("{},{},{},{},{},{}\n", domain_label(d), aux_name(kind), io::format_double(a.p),
                                   io::format_double(a.observed_distance), a.simulated.rows(), a.rank);
            log << fmt::format("gof {} {}: p = {:.3f}\n", domain_label(d), aux_name(kind), a.p);
        }
    }
    io::write_text(p.gof_dir() / "summary.csv", summary);
}

void cmd_export(const RunConfig& cfg, std::ostream& log) {
    Pipeline p(cfg);
    const auto actors = p.actors();
    const auto covs = p.covariates(actors, true);
    std::size_t files = 0;
    for (auto d : p.domains()) {
        const auto series = p.backbone_series(d, actors);
        for (std::size_t m = 0; m < series.size(); ++m) {
            std::vector<io::NodeAttribute> attrs;
            for (const auto& c : covs.actor) {
                io::NodeAttribute a{c.name(), {}};
                for (int i = 0; i < actors.size(); ++i)
                    a.values.push_back(c.missing(i, static_cast<int>(m)) ? std::nullopt
                                                                          : std::optional<double>(c.value(i, static_cast<int>(m))));
                attrs.push_back(std::move(a));
            }
            io::write_text(p.export_dir() / fmt::format("{}_{}.graphml", domain_tag(d), series[m].year),
                           io::graphml(series[m], attrs, p.provenance()));
            ++files;
        }
    }
    log << fmt::format("export: {} GraphML files in {}\n", files, p.export_dir().string());
}

void cmd_run(const RunConfig& cfg, std::ostream& log) {
    cmd_ingest(cfg, log);
    cmd_backbone(cfg, log);
    cmd_estimate(cfg, log);
    if (cfg.get_bool("retain_draws", true)) cmd_gof(cfg, log);
    cmd_export(cfg, log);
}

// ---------------------------------------------------------------------------

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"netdyn: co-authorship networks, disparity backbones and actor-oriented network models"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    int threads = -1;
    std::string out_dir;

    struct Command {
        const char* name;
        const char* help;
        void (*fn)(const RunConfig&, std::ostream&);
    };
    const Command commands[] = {
        {"ingest", "records -> yearly weighted edge lists and descriptive table", cmd_ingest},
        {"backbone", "weighted edge lists -> disparity-filter backbones and trimming report", cmd_backbone},
        {"estimate", "backbone panel -> parameter estimates and report", cmd_estimate},
        {"gof", "estimation draws -> goodness-of-fit files", cmd_gof},
        {"export", "backbone panel -> GraphML per wave", cmd_export},
        {"run", "all stages in sequence", cmd_run},
    };
    std::map<CLI::App*, const Command*> by_app;
    for (const auto& c : commands) {
        auto* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("-c,--config", config_path, "run configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--set", overrides, "override a configuration entry, key=value");
        sub->add_option("--seed", seed, "master seed (overrides the configuration)");
        sub->add_option("--threads", threads, "worker cap (0 = all cores)");
        sub->add_option("--out", out_dir, "output directory (overrides the configuration)");
        by_app[sub] = &c;
    }

    SynthOptions synth;
    std::string synth_dir;
    auto* synth_cmd = app.add_subcommand("synth", "write a synthetic demo corpus and configuration");
    synth_cmd->add_option("dir", synth_dir, "target directory")->required();
    synth_cmd->add_option("--seed", synth.seed, "generator seed");
    synth_cmd->add_option("--first-year", synth.first_year);
    synth_cmd->add_option("--last-year", synth.last_year);
    synth_cmd->add_option("--articles", synth.articles_per_year, "articles in the first year");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    try {
        if (synth_cmd->parsed()) {
            write_demo_dataset(synth_dir, synth);
            out << "synth: demo corpus written to " << synth_dir << " (run: netdyn run -c " << synth_dir << "/demo.cfg)\n";
            return 0;
        }
        for (auto& [sub, cmd] : by_app) {
            if (!sub->parsed()) continue;
            auto cfg = RunConfig::load(config_path);
            for (const auto& o : overrides) cfg.set_override(o);
            if (sub->count("--seed")) cfg.set("seed", std::to_string(seed));
            if (threads >= 0) cfg.set("threads", std::to_string(threads));
            if (!out_dir.empty()) cfg.set("out", fs::absolute(out_dir).string());
            apply_threads(cfg);
            cmd->fn(cfg, out);
        }
        return 0;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace netdyn::cli

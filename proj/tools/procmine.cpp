// Command-line driver: ingestion, discovery, conformance and analytics as
// reproducible runs.  Config files (JSON, strictly validated) provide the
// same keys as the flags; flags win.  Data goes to files or stdout, progress
// and warnings to stderr, and every file is written atomically.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "procmine/procmine.hpp"

using json = nlohmann::ordered_json;
using namespace procmine;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IngestionError("cannot read '" + path + "'");
    return text;
}

// Atomic write: temp file in the target directory, then rename.  "-" writes
// to stdout.  Guarantees no partial output file is ever left behind.
void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) throw IngestionError("failed writing to stdout");
        return;
    }
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IngestionError("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IngestionError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IngestionError("cannot rename temporary file onto '" + path + "'");
    }
}

double round_to(double value, int decimals) {
    double scale = std::pow(10.0, decimals);
    return std::round(value * scale) / scale;
}

double hours(double millis) { return round_to(millis / static_cast<double>(kMillisPerHour), 2); }

// ---------------------------------------------------------------------------
// Config handling

class Config {
public:
    Config() : data_(json::object()) {}

    explicit Config(const std::string& path) : where_("config '" + path + "'") {
        std::string text = read_file(path);
        try {
            data_ = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(where_ + ": " + e.what());
        }
        if (!data_.is_object()) throw ConfigError(where_ + ": top level must be an object");
    }

    void restrict_keys(std::initializer_list<const char*> allowed) const {
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, value] : data_.items()) {
            (void)value;
            if (!ok.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
        }
    }

    bool has(const std::string& key) const { return data_.contains(key); }

    template <typename T>
    T get(const std::string& key) const {
        try {
            return data_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(where_ + ": bad value for '" + key + "': " + e.what());
        }
    }

    const json& raw(const std::string& key) const { return data_.at(key); }

    const std::string& where() const { return where_; }

private:
    json data_;
    std::string where_ = "config";
};

void check_object_keys(const json& obj, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

// ---------------------------------------------------------------------------
// Event-log input

struct InputOptions {
    std::string path;
    std::string format = "auto";  // auto | xes | csv
    ColumnMapping mapping;
    std::vector<std::string> rename_pairs;  // from=to
    std::vector<std::string> fill;
    std::vector<std::pair<std::string, std::string>> config_rename;
    std::string config_path;  // --config, shared across subcommands
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--config", in.config_path, "JSON config file; flags override its keys");
    cmd->add_option("-i,--input", in.path, "event log to read");
    cmd->add_option("--input-format", in.format, "auto, xes or csv")
        ->check(CLI::IsMember({"auto", "xes", "csv"}));
    cmd->add_option("--csv-case-column", in.mapping.case_column, "CSV column with the case id");
    cmd->add_option("--csv-activity-column", in.mapping.activity_column,
                    "CSV column with the activity");
    cmd->add_option("--csv-timestamp-column", in.mapping.timestamp_column,
                    "CSV column with the timestamp");
    cmd->add_option("--csv-timestamp-format", in.mapping.timestamp_format,
                    "strptime-style timestamp format (default ISO 8601)");
    cmd->add_option("--rename", in.rename_pairs, "activity rename OLD=NEW (repeatable)");
    cmd->add_option("--fill", in.fill,
                    "attribute keys to fill forward/backward per trace (repeatable)");
}

void merge_input_config(const CLI::App* cmd, const Config& cfg, InputOptions& in) {
    if (!cmd->count("--input") && cfg.has("input")) in.path = cfg.get<std::string>("input");
    if (!cmd->count("--input-format") && cfg.has("input_format"))
        in.format = cfg.get<std::string>("input_format");
    if (cfg.has("csv")) {
        const json& c = cfg.raw("csv");
        check_object_keys(c,
                          {"case_column", "activity_column", "timestamp_column",
                           "timestamp_format", "attributes"},
                          cfg.where() + ": csv");
        auto pick = [&](const char* flag, const char* key, std::string& target) {
            if (!cmd->count(flag) && c.contains(key)) target = c.at(key).get<std::string>();
        };
        pick("--csv-case-column", "case_column", in.mapping.case_column);
        pick("--csv-activity-column", "activity_column", in.mapping.activity_column);
        pick("--csv-timestamp-column", "timestamp_column", in.mapping.timestamp_column);
        pick("--csv-timestamp-format", "timestamp_format", in.mapping.timestamp_format);
        if (c.contains("attributes")) {
            for (const json& attr : c.at("attributes")) {
                check_object_keys(attr, {"column", "kind"}, cfg.where() + ": csv attribute");
                std::string column = attr.at("column").get<std::string>();
                std::string kind = attr.at("kind").get<std::string>();
                AttrKind parsed;
                if (kind == "string") parsed = AttrKind::Text;
                else if (kind == "int") parsed = AttrKind::Integer;
                else if (kind == "float") parsed = AttrKind::Real;
                else if (kind == "boolean") parsed = AttrKind::Boolean;
                else if (kind == "date") parsed = AttrKind::Time;
                else
                    throw ConfigError(cfg.where() + ": unknown attribute kind '" + kind + "'");
                in.mapping.attribute_columns.emplace_back(column, parsed);
            }
        }
    }
    if (cfg.has("rename")) {
        const json& r = cfg.raw("rename");
        if (!r.is_object()) throw ConfigError(cfg.where() + ": rename must be an object");
        for (const auto& [from, to] : r.items())
            in.config_rename.emplace_back(from, to.get<std::string>());
    }
    if (!cmd->count("--fill") && cfg.has("fill_missing"))
        in.fill = cfg.get<std::vector<std::string>>("fill_missing");
}

EventLog load_log(const InputOptions& in) {
    if (in.path.empty()) throw ConfigError("no input log given (use --input or config 'input')");
    std::string format = in.format;
    if (format == "auto") {
        std::filesystem::path p(in.path);
        if (p.extension() == ".csv") format = "csv";
        else format = "xes";
    }
    std::string text = read_file(in.path);
    EventLog log;
    if (format == "csv") {
        if (in.mapping.case_column.empty() || in.mapping.activity_column.empty() ||
            in.mapping.timestamp_column.empty())
            throw ConfigError("csv input needs case/activity/timestamp column names");
        log = parse_csv(text, in.mapping);
    } else {
        log = parse_xes(text);
    }

    std::map<std::string, std::string> rename(in.config_rename.begin(), in.config_rename.end());
    for (const std::string& pair : in.rename_pairs) {
        std::size_t eq = pair.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("bad --rename '" + pair + "' (expected OLD=NEW)");
        rename[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    if (!rename.empty()) log = rename_activities(log, rename);

    if (!in.fill.empty()) {
        std::set<std::string> keys(in.fill.begin(), in.fill.end());
        FillReport filled = fill_missing(log, keys);
        for (const auto& [key, cases] : filled.untouched)
            if (!cases.empty())
                std::cerr << "procmine: note: " << cases.size() << " case(s) have no '" << key
                          << "' value to fill\n";
        log = std::move(filled.log);
    }
    std::cerr << "procmine: loaded " << log.traces.size() << " trace(s), " << log.event_count()
              << " event(s) from " << in.path << "\n";
    return log;
}

unsigned pick_threads(const CLI::App* cmd, const Config& cfg, unsigned flag_value) {
    unsigned threads = flag_value;
    if (!cmd->count("--threads") && cfg.has("threads")) threads = cfg.get<unsigned>("threads");
    if (threads == 0) throw ConfigError("threads must be at least 1");
    return threads;
}

std::size_t default_align_budget() {
    if (const char* env = std::getenv("PROCMINE_ALIGN_BUDGET")) {
        char* end = nullptr;
        unsigned long long value = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || value == 0)
            throw ConfigError("PROCMINE_ALIGN_BUDGET must be a positive integer");
        return static_cast<std::size_t>(value);
    }
    return kDefaultAlignBudget;
}

// ---------------------------------------------------------------------------
// Model loading and report plumbing

PetriNet load_model(const std::string& path) {
    if (path.empty()) throw ConfigError("no model given (use --model or config 'model')");
    return import_pnml(read_file(path));
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

json guideline_to_json(const GuidelineReport& g) {
    json out;
    out["name"] = g.name;
    out["anchor"] = g.anchor;
    out["target"] = g.target;
    out["limit_hours"] = hours(static_cast<double>(g.limit_ms));
    out["evaluable"] = g.evaluable;
    out["compliant"] = g.compliant;
    out["violating"] = g.violating;
    out["non_evaluable"] = g.non_evaluable;
    out["negative_delays"] = g.negative_delays;
    out["violation_rate"] = round_to(g.violation_rate, 4);
    out["mean_delay_hours"] = hours(g.mean_delay_ms);
    return out;
}

json rule_to_json(const DecisionRule& rule, const RuleReport& r) {
    json out;
    out["name"] = r.name;
    out["if"] = rule.antecedent_text;
    out["then"] = rule.consequent_text;
    out["support"] = r.support;
    out["satisfied"] = r.satisfied;
    out["evaluable"] = r.evaluable;
    out["confidence"] = round_to(r.confidence, 4);
    out["counterexamples"] = r.counterexamples;
    return out;
}

// ---------------------------------------------------------------------------
// Subcommands

struct ConvertArgs {
    InputOptions in;
    std::string output;
    std::string to = "auto";  // auto | xes | csv
};

void run_convert(const CLI::App* cmd, ConvertArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "output",
                       "output_format"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--output") && cfg.has("output")) args.output = cfg.get<std::string>("output");
    if (!cmd->count("--to") && cfg.has("output_format"))
        args.to = cfg.get<std::string>("output_format");
    if (args.output.empty()) throw ConfigError("convert needs --output");

    EventLog log = load_log(args.in);
    std::string to = args.to;
    if (to == "auto")
        to = std::filesystem::path(args.output).extension() == ".csv" ? "csv" : "xes";
    if (to == "xes")
        write_output(args.output, serialize_xes(log));
    else if (to == "csv")
        write_output(args.output, serialize_csv(log));
    else
        throw ConfigError("unknown output format '" + to + "' (expected xes or csv)");
    std::cerr << "procmine: wrote " << args.output << "\n";
}

struct DiscoverArgs {
    InputOptions in;
    std::string algorithm = "inductive";
    double noise = 0.0;
    HeuristicsParams params;
    std::string model_output;
    std::string dot_output;
    std::string report = "-";
    unsigned threads = 1;
};

void run_discover(const CLI::App* cmd, DiscoverArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "algorithm",
                       "noise_threshold", "heuristics", "model_output", "dot_output", "report",
                       "threads"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--algorithm") && cfg.has("algorithm"))
        args.algorithm = cfg.get<std::string>("algorithm");
    if (!cmd->count("--noise") && cfg.has("noise_threshold"))
        args.noise = cfg.get<double>("noise_threshold");
    if (cfg.has("heuristics")) {
        const json& h = cfg.raw("heuristics");
        check_object_keys(h,
                          {"dependency_threshold", "long_distance_threshold", "and_threshold",
                           "min_directly_follows"},
                          cfg.where() + ": heuristics");
        auto pick = [&](const char* flag, const char* key, auto& target) {
            if (!cmd->count(flag) && h.contains(key))
                target = h.at(key).get<std::decay_t<decltype(target)>>();
        };
        pick("--dependency-threshold", "dependency_threshold", args.params.dependency_threshold);
        pick("--long-distance-threshold", "long_distance_threshold",
             args.params.long_distance_threshold);
        pick("--and-threshold", "and_threshold", args.params.and_threshold);
        pick("--min-directly-follows", "min_directly_follows", args.params.min_directly_follows);
    }
    if (!cmd->count("--model-output") && cfg.has("model_output"))
        args.model_output = cfg.get<std::string>("model_output");
    if (!cmd->count("--dot-output") && cfg.has("dot_output"))
        args.dot_output = cfg.get<std::string>("dot_output");
    if (!cmd->count("--report") && cfg.has("report")) args.report = cfg.get<std::string>("report");

    if (args.algorithm != "inductive" && args.algorithm != "heuristics")
        throw ConfigError("unknown algorithm '" + args.algorithm +
                          "' (expected inductive or heuristics)");

    EventLog log = load_log(args.in);
    json summary;
    summary["algorithm"] = args.algorithm;
    summary["input"] = args.in.path;
    summary["traces"] = log.traces.size();
    summary["events"] = log.event_count();

    PetriNet net;
    if (args.algorithm == "inductive") {
        ProcessTree tree = discover_inductive(log, args.noise);
        net = tree_to_petri(tree);
        summary["noise_threshold"] = args.noise;
        summary["tree"] = format_tree(tree);
        summary["activities"] = tree_alphabet(tree).size();
    } else {
        CausalNet cnet = discover_heuristics(log, args.params);
        net = cnet_to_petri(cnet);
        summary["dependency_threshold"] = args.params.dependency_threshold;
        summary["long_distance_threshold"] = args.params.long_distance_threshold;
        summary["and_threshold"] = args.params.and_threshold;
        summary["min_directly_follows"] = args.params.min_directly_follows;
        summary["activities"] = cnet.nodes.size();
        summary["connected_activities"] = genuinely_connected(cnet.graph).size();
        std::size_t repaired = 0;
        for (const auto& [pair, arc] : cnet.graph.arcs) {
            (void)pair;
            if (arc.repaired) ++repaired;
        }
        summary["dependency_arcs"] = cnet.graph.arcs.size();
        summary["repaired_arcs"] = repaired;
        summary["long_distance_arcs"] = cnet.long_distance_arcs.size();
    }
    std::size_t silent = 0;
    for (const auto& t : net.transitions)
        if (t.silent()) ++silent;
    summary["places"] = net.places.size();
    summary["transitions"] = net.transitions.size();
    summary["silent_transitions"] = silent;
    summary["arcs"] = net.arc_count();

    if (!args.model_output.empty()) write_output(args.model_output, export_pnml(net));
    if (!args.dot_output.empty()) write_output(args.dot_output, export_dot(net));
    write_output(args.report, dump_report(summary));
    if (!args.model_output.empty()) std::cerr << "procmine: wrote " << args.model_output << "\n";
    if (!args.dot_output.empty()) std::cerr << "procmine: wrote " << args.dot_output << "\n";
}

struct ConformanceArgs {
    InputOptions in;
    std::string model;
    bool no_alignments = false;
    bool per_trace = false;
    std::size_t budget = 0;  // 0 = default/env
    std::string report = "-";
    unsigned threads = 1;
};

void run_conformance(const CLI::App* cmd, ConformanceArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "model",
                       "alignments", "align_budget", "per_trace", "report", "threads"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--model") && cfg.has("model")) args.model = cfg.get<std::string>("model");
    if (!cmd->count("--no-alignments") && cfg.has("alignments"))
        args.no_alignments = !cfg.get<bool>("alignments");
    if (!cmd->count("--per-trace") && cfg.has("per_trace"))
        args.per_trace = cfg.get<bool>("per_trace");
    if (!cmd->count("--budget") && cfg.has("align_budget"))
        args.budget = cfg.get<std::size_t>("align_budget");
    if (!cmd->count("--report") && cfg.has("report")) args.report = cfg.get<std::string>("report");
    args.threads = pick_threads(cmd, cfg, args.threads);

    EventLog log = load_log(args.in);
    PetriNet net = load_model(args.model);
    QualityOptions options;
    options.alignments = !args.no_alignments;
    options.node_limit = args.budget > 0 ? args.budget : default_align_budget();
    options.threads = args.threads;
    QualityReport q = quality_report(net, log, options);

    json report;
    report["log"] = args.in.path;
    report["model"] = args.model;
    report["traces"] = log.traces.size();
    report["fitness_replay"] = round_to(q.fitness_replay, 6);
    report["fraction_fitting"] = round_to(q.fraction_fitting, 6);
    if (q.fitness_alignment) report["fitness_alignment"] = round_to(*q.fitness_alignment, 6);
    report["precision"] = round_to(q.precision, 6);
    report["generalization"] = round_to(q.generalization, 6);
    report["simplicity"] = round_to(q.simplicity, 6);
    report["alignment_budget"] = options.node_limit;
    report["excluded_traces"] = q.excluded_traces;
    report["partial"] = !q.excluded_traces.empty();
    json warnings = json::array();
    if (q.unknown_label_events > 0)
        warnings.push_back(std::to_string(q.unknown_label_events) +
                           " event(s) reference activities absent from the model");
    report["warnings"] = warnings;
    if (args.per_trace) {
        ReplayResult replayed = token_replay(net, log, options.threads);
        json per = json::array();
        for (std::size_t i = 0; i < log.traces.size(); ++i) {
            const TraceReplay& t = replayed.per_trace[i];
            json row;
            row["case"] = log.traces[i].case_id;
            row["fitness"] = round_to(t.fitness, 6);
            row["fits"] = t.fits;
            row["missing"] = t.missing;
            row["remaining"] = t.remaining;
            per.push_back(row);
        }
        report["per_trace"] = per;
    }
    write_output(args.report, dump_report(report));
}

struct VariantsArgs {
    InputOptions in;
    std::size_t top = 0;  // 0 = all
    std::string report = "-";
};

void run_variants(const CLI::App* cmd, VariantsArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "top", "report"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--top") && cfg.has("top")) args.top = cfg.get<std::size_t>("top");
    if (!cmd->count("--report") && cfg.has("report")) args.report = cfg.get<std::string>("report");

    EventLog log = load_log(args.in);
    std::vector<Variant> variants = extract_variants(log);
    LogSummary stats = variant_stats(log);

    json report;
    report["traces"] = stats.trace_count;
    report["events"] = stats.event_count;
    report["activities"] = stats.activity_count;
    report["variants"] = stats.variant_count;
    report["share_over_one_day"] = round_to(stats.share_over_one_day, 4);
    json longest;
    longest["case"] = stats.longest_case_id;
    longest["events"] = stats.longest_case_events;
    longest["duration_hours"] = hours(static_cast<double>(stats.longest_case_duration_ms));
    report["longest_trace"] = longest;
    json occurrences = json::object();
    for (const auto& [activity, count] : stats.occurrences) occurrences[activity] = count;
    report["occurrences"] = occurrences;
    json rework = json::object();
    for (const auto& [activity, count] : stats.rework) rework[activity] = count;
    report["rework"] = rework;

    json list = json::array();
    std::size_t limit = args.top == 0 ? variants.size() : std::min(args.top, variants.size());
    for (std::size_t i = 0; i < limit; ++i) {
        const Variant& v = variants[i];
        json row;
        row["signature"] = v.signature;
        row["frequency"] = v.frequency;
        row["cases"] = v.case_ids;
        row["min_duration_hours"] = hours(static_cast<double>(v.min_duration_ms));
        row["mean_duration_hours"] = hours(v.mean_duration_ms);
        row["max_duration_hours"] = hours(static_cast<double>(v.max_duration_ms));
        list.push_back(row);
    }
    report["variant_table"] = list;
    write_output(args.report, dump_report(report));
}

struct GuidelinesArgs {
    InputOptions in;
    std::string anchor;
    std::string target;
    double limit_hours = 0.0;
    std::string name;
    std::string report = "-";
};

void run_guidelines(const CLI::App* cmd, GuidelinesArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "guidelines",
                       "rules", "report"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--report") && cfg.has("report")) args.report = cfg.get<std::string>("report");

    struct Spec {
        std::string name, anchor, target;
        double limit_hours;
    };
    std::vector<Spec> specs;
    if (cmd->count("--anchor") || cmd->count("--target")) {
        if (args.anchor.empty() || args.target.empty() || args.limit_hours <= 0.0)
            throw ConfigError("an ad-hoc guideline needs --anchor, --target and --limit-hours");
        specs.push_back({args.name, args.anchor, args.target, args.limit_hours});
    }
    if (cfg.has("guidelines")) {
        for (const json& g : cfg.raw("guidelines")) {
            check_object_keys(g, {"name", "anchor", "target", "limit_hours"},
                              cfg.where() + ": guideline");
            specs.push_back({g.value("name", std::string()), g.at("anchor").get<std::string>(),
                             g.at("target").get<std::string>(), g.at("limit_hours").get<double>()});
        }
    }
    std::vector<DecisionRule> rules;
    if (cfg.has("rules")) {
        for (const json& r : cfg.raw("rules")) {
            check_object_keys(r, {"name", "if", "then"}, cfg.where() + ": rule");
            rules.push_back(make_rule(r.value("name", std::string()),
                                      r.at("if").get<std::string>(),
                                      r.at("then").get<std::string>()));
        }
    }
    if (specs.empty() && rules.empty())
        throw ConfigError("nothing to check: give --anchor/--target or config guidelines/rules");

    EventLog log = load_log(args.in);
    json report;
    json guideline_list = json::array();
    for (const Spec& spec : specs) {
        std::int64_t limit_ms =
            static_cast<std::int64_t>(std::llround(spec.limit_hours * kMillisPerHour));
        guideline_list.push_back(guideline_to_json(
            check_time_guideline(log, spec.anchor, spec.target, limit_ms, spec.name)));
    }
    report["guidelines"] = guideline_list;
    json rule_list = json::array();
    for (const DecisionRule& rule : rules)
        rule_list.push_back(rule_to_json(rule, evaluate_rule(log, rule)));
    report["rules"] = rule_list;
    write_output(args.report, dump_report(report));
}

struct CohortsArgs {
    InputOptions in;
    std::string report = "-";
};

void run_cohorts(const CLI::App* cmd, CohortsArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "report"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--report") && cfg.has("report")) args.report = cfg.get<std::string>("report");

    EventLog log = load_log(args.in);
    CohortReport c = cohort_stats(log);
    json report;
    report["total_cases"] = c.total_cases;
    report["discharged_without_admission"] = c.discharged_without_admission;
    report["no_release"] = c.no_release;
    report["admitted_nc"] = c.admitted_nc;
    report["admitted_ic"] = c.admitted_ic;
    report["nc_then_ic"] = c.nc_then_ic;
    report["returns_28d"] = c.returns_28d;
    report["returns_1y"] = c.returns_1y;
    json by_release = json::object();
    for (const auto& [label, count] : c.returns_by_release) by_release[label] = count;
    report["returns_by_release"] = by_release;
    report["returns_unattributed"] = c.returns_unattributed;
    if (c.total_cases > 0) {
        auto rate = [&](std::size_t n) {
            return round_to(static_cast<double>(n) / static_cast<double>(c.total_cases), 4);
        };
        json rates;
        rates["discharged_without_admission"] = rate(c.discharged_without_admission);
        rates["admitted_nc"] = rate(c.admitted_nc);
        rates["admitted_ic"] = rate(c.admitted_ic);
        rates["nc_then_ic"] = rate(c.nc_then_ic);
        rates["returns_28d"] = rate(c.returns_28d);
        rates["returns_1y"] = rate(c.returns_1y);
        report["rates"] = rates;
    }
    write_output(args.report, dump_report(report));
}

struct ExportArgs {
    InputOptions in;  // used when exporting from a log
    std::string model;
    std::string tree;
    std::string as = "dot";
    std::string output = "-";
};

void run_export(const CLI::App* cmd, ExportArgs& args) {
    Config cfg = args.in.config_path.empty() ? Config() : Config(args.in.config_path);
    cfg.restrict_keys({"input", "input_format", "csv", "rename", "fill_missing", "model", "tree",
                       "as", "output"});
    merge_input_config(cmd, cfg, args.in);
    if (!cmd->count("--model") && cfg.has("model")) args.model = cfg.get<std::string>("model");
    if (!cmd->count("--tree") && cfg.has("tree")) args.tree = cfg.get<std::string>("tree");
    if (!cmd->count("--as") && cfg.has("as")) args.as = cfg.get<std::string>("as");
    if (!cmd->count("--output") && cfg.has("output"))
        args.output = cfg.get<std::string>("output");

    int sources = (!args.model.empty()) + (!args.tree.empty()) + (!args.in.path.empty());
    if (sources != 1)
        throw ConfigError("export needs exactly one of --model, --tree or --input");

    std::string content;
    if (!args.model.empty()) {
        PetriNet net = load_model(args.model);
        if (args.as == "dot") content = export_dot(net);
        else if (args.as == "pnml") content = export_pnml(net);
        else throw ConfigError("a model exports as dot or pnml, not '" + args.as + "'");
    } else if (!args.tree.empty()) {
        ProcessTree tree = parse_tree(args.tree);
        if (args.as == "dot") content = export_dot(tree);
        else if (args.as == "pnml") content = export_pnml(tree_to_petri(tree));
        else throw ConfigError("a tree exports as dot or pnml, not '" + args.as + "'");
    } else {
        EventLog log = load_log(args.in);
        if (args.as == "dot") content = export_dot(build_dfg(log));
        else if (args.as == "xes") content = serialize_xes(log);
        else if (args.as == "csv") content = serialize_csv(log);
        else throw ConfigError("a log exports as dot, xes or csv, not '" + args.as + "'");
    }
    write_output(args.output, content);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"process-mining toolkit: discovery, conformance and clinical analytics"};
    app.require_subcommand(1);

    ConvertArgs convert_args;
    auto* convert = app.add_subcommand("convert", "read an event log and write it in XES or CSV");
    add_input_flags(convert, convert_args.in);
    convert->add_option("-o,--output", convert_args.output, "output path");
    convert->add_option("--to", convert_args.to, "output format: auto, xes or csv")
        ->check(CLI::IsMember({"auto", "xes", "csv"}));
    convert->callback([&] { run_convert(convert, convert_args); });

    DiscoverArgs discover_args;
    auto* discover = app.add_subcommand("discover", "discover a process model from an event log");
    add_input_flags(discover, discover_args.in);
    discover->add_option("-a,--algorithm", discover_args.algorithm, "inductive or heuristics")
        ->check(CLI::IsMember({"inductive", "heuristics"}));
    discover->add_option("--noise", discover_args.noise,
                         "inductive miner noise threshold in [0,1] (default 0)");
    discover->add_option("--dependency-threshold", discover_args.params.dependency_threshold,
                         "heuristics dependency threshold (default 0.95)");
    discover->add_option("--long-distance-threshold",
                         discover_args.params.long_distance_threshold,
                         "heuristics long-distance threshold (default 0.98)");
    discover->add_option("--and-threshold", discover_args.params.and_threshold,
                         "heuristics AND-split threshold (default 0.65)");
    discover->add_option("--min-directly-follows", discover_args.params.min_directly_follows,
                         "minimum directly-follows count per dependency arc (default 1)");
    discover->add_option("--model-output", discover_args.model_output, "PNML output path");
    discover->add_option("--dot-output", discover_args.dot_output, "DOT output path");
    discover->add_option("--report", discover_args.report,
                         "summary JSON path (default - for stdout)");
    discover->callback([&] { run_discover(discover, discover_args); });

    ConformanceArgs conformance_args;
    auto* conformance =
        app.add_subcommand("conformance", "score a model against a log (four quality metrics)");
    add_input_flags(conformance, conformance_args.in);
    conformance->add_option("-m,--model", conformance_args.model, "PNML model path");
    conformance->add_flag("--no-alignments", conformance_args.no_alignments,
                          "skip alignment-based fitness");
    conformance->add_flag("--per-trace", conformance_args.per_trace,
                          "include per-trace replay diagnostics");
    conformance->add_option("--budget", conformance_args.budget,
                            "alignment node budget (also PROCMINE_ALIGN_BUDGET)");
    conformance->add_option("--report", conformance_args.report,
                            "report JSON path (default - for stdout)");
    conformance->add_option("--threads", conformance_args.threads,
                            "worker threads (default 1; results identical for any value)");
    conformance->callback([&] { run_conformance(conformance, conformance_args); });

    VariantsArgs variants_args;
    auto* variants = app.add_subcommand("variants", "variant table and activity statistics");
    add_input_flags(variants, variants_args.in);
    variants->add_option("--top", variants_args.top, "keep only the N most frequent variants");
    variants->add_option("--report", variants_args.report,
                         "report JSON path (default - for stdout)");
    variants->callback([&] { run_variants(variants, variants_args); });

    GuidelinesArgs guidelines_args;
    auto* guidelines =
        app.add_subcommand("guidelines", "temporal guideline checks and decision rules");
    add_input_flags(guidelines, guidelines_args.in);
    guidelines->add_option("--anchor", guidelines_args.anchor, "guideline anchor activity");
    guidelines->add_option("--target", guidelines_args.target, "guideline target activity");
    guidelines->add_option("--limit-hours", guidelines_args.limit_hours,
                           "guideline limit in hours");
    guidelines->add_option("--name", guidelines_args.name, "name for the ad-hoc guideline");
    guidelines->add_option("--report", guidelines_args.report,
                           "report JSON path (default - for stdout)");
    guidelines->callback([&] { run_guidelines(guidelines, guidelines_args); });

    CohortsArgs cohorts_args;
    auto* cohorts = app.add_subcommand("cohorts", "admission pathway and return statistics");
    add_input_flags(cohorts, cohorts_args.in);
    cohorts->add_option("--report", cohorts_args.report,
                        "report JSON path (default - for stdout)");
    cohorts->callback([&] { run_cohorts(cohorts, cohorts_args); });

    ExportArgs export_args;
    auto* exporter = app.add_subcommand("export", "render a model, tree or log as DOT/PNML/...");
    add_input_flags(exporter, export_args.in);
    exporter->add_option("-m,--model", export_args.model, "PNML model to export");
    exporter->add_option("--tree", export_args.tree, "process tree in text notation");
    exporter->add_option("--as", export_args.as, "dot, pnml, xes or csv")
        ->check(CLI::IsMember({"dot", "pnml", "xes", "csv"}));
    exporter->add_option("-o,--output", export_args.output, "output path (default - for stdout)");
    exporter->callback([&] { run_export(exporter, export_args); });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "procmine: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "procmine: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

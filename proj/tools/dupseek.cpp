// dupseek: duplicate bug report triage from the command line.
//
// Exit codes: 0 unique / success, 10 duplicate, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dupseek/errors.hpp"
#include "dupseek/eval.hpp"
#include "dupseek/ingest.hpp"
#include "dupseek/pipeline.hpp"
#include "dupseek/report.hpp"

namespace fs = std::filesystem;
using namespace dupseek;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDuplicate = 10;

// Raised for flag combinations CLI11 cannot express.
struct UsageError : Error {
    using Error::Error;
};

struct QueryOptions {
    std::string id = "new";
    std::optional<std::string> summary;
    std::string description;
    std::optional<std::string> xml;

    void attach(CLI::App& app) {
        app.add_option("--id", id, "Id of the new report")->capture_default_str();
        app.add_option("--summary", summary, "Summary of the new report");
        app.add_option("--description", description, "Description of the new report");
        app.add_option("--xml", xml, "One-bug Bugzilla XML export holding the new report");
    }

    BugReport resolve() const {
        if (xml && summary) throw UsageError("--xml and --summary are mutually exclusive");
        if (xml) {
            auto reports = parse_bugzilla_file(*xml);
            if (reports.size() != 1) {
                throw DataError(*xml + ": expected exactly one bug, found " +
                                std::to_string(reports.size()));
            }
            return reports.front();
        }
        if (!summary) throw UsageError("give the new report with --summary or --xml");
        BugReport r{id, *summary, description};
        validate_report(r);
        return r;
    }
};

// Flags > config file > defaults.
struct ConfigOptions {
    std::optional<double> threshold;
    std::optional<std::size_t> topics;
    std::optional<std::string> stopwords;
    std::optional<std::string> config_file;

    void attach(CLI::App& app) {
        app.add_option("--threshold", threshold, "Cosine threshold in [0, 1] (default 0.80)");
        app.add_option("--topics", topics, "LSI topic count K (default min(n - 1, 300))");
        app.add_option("--stopwords", stopwords, "Stop-word file, one word per line");
        app.add_option("--config", config_file, "JSON file with threshold/topics/stopwords");
    }

    PipelineConfig resolve() const {
        PipelineConfig config;
        std::optional<double> thr;
        std::optional<std::size_t> k;
        std::optional<fs::path> stops;
        if (config_file) {
            std::ifstream in(*config_file);
            if (!in) throw MissingFileError(*config_file);
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(in);
                if (j.contains("threshold")) thr = j.at("threshold").get<double>();
                if (j.contains("topics")) k = j.at("topics").get<std::size_t>();
                if (j.contains("stopwords")) {
                    // relative to the config file
                    stops = fs::path(*config_file).parent_path() /
                            j.at("stopwords").get<std::string>();
                }
            } catch (const nlohmann::json::exception& e) {
                throw FormatError(e.what(), *config_file, 0);
            }
        }
        if (threshold) thr = threshold;
        if (topics) k = topics;
        if (stopwords) stops = fs::path(*stopwords);

        if (thr) config.threshold = *thr;
        if (!(config.threshold >= 0.0 && config.threshold <= 1.0)) {
            throw ParameterError("--threshold must lie in [0, 1]");
        }
        if (k) {
            if (*k == 0) throw ParameterError("--topics must be at least 1");
            config.topics = k;
        }
        if (stops) config.stop_words = StopWordList::load(*stops);
        return config;
    }
};

void write_output(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing", path);
    out << contents;
    if (!out) throw IoError("write failed", path);
}

void dump_matrices(const fs::path& dir, const DuplicateDetector& detector, const BugReport& query,
                   const SimilarityMatrix& csm) {
    fs::create_directories(dir);
    std::ofstream tdm(dir / "tdm.csv"), tqm(dir / "tqm.csv"), sim(dir / "csm.csv");
    if (!tdm || !tqm || !sim) throw IoError("cannot write matrix dumps", dir);
    write_tdm_csv(tdm, detector.tdm(), detector.vocabulary());
    write_query_csv(tqm, detector.vectorize(query), detector.vocabulary());
    write_csm_csv(sim, csm);
}

int cmd_ingest(const std::string& xml, const std::string& store) {
    Corpus corpus(parse_bugzilla_file(xml));
    save_corpus(corpus, store);
    std::cout << corpus.size() << " reports ingested\n";
    return kExitOk;
}

struct CheckArgs {
    std::string store;
    QueryOptions query;
    ConfigOptions config;
    std::string format = "text";
    std::optional<std::string> out;
    std::optional<std::string> dump_dir;
};

int cmd_check(const CheckArgs& args) {
    const Corpus corpus = load_corpus(args.store);
    const BugReport query = args.query.resolve();
    const DuplicateDetector detector(corpus, args.config.resolve());
    const CheckResult result = detector.check_detailed(query);

    const std::string machine = report_to_machine(result.report);
    std::cout << (args.format == "machine" ? machine : report_to_text(result.report));
    if (args.out) write_output(*args.out, machine);
    if (args.dump_dir) dump_matrices(*args.dump_dir, detector, query, result.csm);
    return result.report.verdict == Verdict::duplicate ? kExitDuplicate : kExitOk;
}

int cmd_accept(const std::string& store, const QueryOptions& query) {
    Corpus corpus = load_corpus(store);
    BugReport report = query.resolve();
    const std::string id = report.id;
    corpus.add(std::move(report));
    save_corpus(corpus, store);
    std::cout << "accepted " << id << " (" << corpus.size() << " reports)\n";
    return kExitOk;
}

int cmd_reject(const std::optional<std::string>& store, std::optional<std::string> ledger,
               const QueryOptions& query) {
    std::string id = query.id;
    if (query.xml) id = query.resolve().id;
    if (!ledger) {
        if (!store) throw UsageError("reject needs --ledger or --store");
        ledger = *store + ".rejected";
    }
    std::ofstream out(*ledger, std::ios::app);
    if (!out) throw IoError("cannot open for appending", *ledger);
    out << id << '\n';
    if (!out) throw IoError("write failed", *ledger);
    std::cout << "rejected " << id << " (logged to " << *ledger << ")\n";
    return kExitOk;
}

struct GraphArgs {
    std::optional<std::string> report;
    std::optional<std::string> store;
    QueryOptions query;
    ConfigOptions config;
    std::string kind = "similarity";
    std::string out;
};

int cmd_graph(const GraphArgs& args) {
    RetrievalReport report;
    if (args.report) {
        if (args.store) throw UsageError("--report and --store are mutually exclusive");
        std::ifstream in(*args.report, std::ios::binary);
        if (!in) throw MissingFileError(*args.report);
        const std::string text((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
        report = report_from_machine(text, *args.report);
    } else if (args.store) {
        const Corpus corpus = load_corpus(*args.store);
        report = DuplicateDetector(corpus, args.config.resolve()).check(args.query.resolve());
    } else {
        throw UsageError("graph needs --report or --store with a query");
    }
    write_output(args.out, args.kind == "poset" ? report_poset_dot(report)
                                                : similarity_to_dot(report));
    std::cout << "wrote " << args.kind << " graph to " << args.out << '\n';
    return kExitOk;
}

struct EvalArgs {
    std::string store;
    std::string truth;
    ConfigOptions config;
    std::string format = "text";
    std::optional<std::string> out;
    std::string name;
    bool scan_unlabeled = false;
};

int cmd_eval(const EvalArgs& args) {
    const Corpus corpus = load_corpus(args.store);
    const GroundTruth truth = GroundTruth::load(args.truth);
    const PipelineConfig config = args.config.resolve();
    const ExperimentResult result =
        run_experiment(corpus, truth, config, {.scan_unlabeled = args.scan_unlabeled});

    const std::string machine = metrics_to_machine(result, config);
    const std::string name = args.name.empty() ? fs::path(args.store).stem().string() : args.name;
    std::cout << (args.format == "machine" ? machine : metrics_to_text(result, name));
    if (args.out) write_output(*args.out, machine);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Duplicate bug report retrieval with LSI and formal concept analysis"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "dupseek 1.0.0");

    std::string ingest_xml, ingest_store;
    auto* ingest = app.add_subcommand("ingest", "Parse a Bugzilla XML export into a store");
    ingest->add_option("xml", ingest_xml, "Bugzilla XML export")->required();
    ingest->add_option("--store", ingest_store, "Store file to (over)write")->required();

    CheckArgs check_args;
    auto* check = app.add_subcommand("check", "Check a new report against the store");
    check->add_option("--store", check_args.store, "Store file")->required();
    check_args.query.attach(*check);
    check_args.config.attach(*check);
    check->add_option("--format", check_args.format, "Stdout format")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();
    check->add_option("--out", check_args.out, "Write the machine-readable report here");
    check->add_option("--dump-dir", check_args.dump_dir, "Write tdm.csv, tqm.csv, csm.csv here");

    std::string accept_store;
    QueryOptions accept_query;
    auto* accept = app.add_subcommand("accept", "Add a unique report to the store");
    accept->add_option("--store", accept_store, "Store file")->required();
    accept_query.attach(*accept);

    std::optional<std::string> reject_store, reject_ledger;
    QueryOptions reject_query;
    auto* reject = app.add_subcommand("reject", "Log a duplicate report; the store is untouched");
    reject->add_option("--store", reject_store, "Store file (ledger defaults to <store>.rejected)");
    reject->add_option("--ledger", reject_ledger, "Discard ledger file");
    reject_query.attach(*reject);

    GraphArgs graph_args;
    auto* graph = app.add_subcommand("graph", "Emit a Graphviz DOT file");
    graph->add_option("--report", graph_args.report, "Machine-readable report from check --out");
    graph->add_option("--store", graph_args.store, "Store file (runs a check first)");
    graph_args.query.attach(*graph);
    graph_args.config.attach(*graph);
    graph->add_option("--kind", graph_args.kind, "similarity or poset")
        ->check(CLI::IsMember({"similarity", "poset"}))
        ->capture_default_str();
    graph->add_option("--out", graph_args.out, "DOT output file")->required();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Leave-one-out recall/precision/F-measure");
    eval->add_option("--store", eval_args.store, "Store file")->required();
    eval->add_option("--truth", eval_args.truth, "query_id<TAB>duplicate_id lines")->required();
    eval_args.config.attach(*eval);
    eval->add_option("--format", eval_args.format, "Stdout format")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();
    eval->add_option("--out", eval_args.out, "Write machine-readable metrics here");
    eval->add_option("--name", eval_args.name, "Data set name for the table");
    eval->add_flag("--scan-unlabeled", eval_args.scan_unlabeled,
                   "Also count unlabeled reports flagged as duplicates");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*ingest) return cmd_ingest(ingest_xml, ingest_store);
        if (*check) return cmd_check(check_args);
        if (*accept) return cmd_accept(accept_store, accept_query);
        if (*reject) return cmd_reject(reject_store, reject_ledger, reject_query);
        if (*graph) return cmd_graph(graph_args);
        if (*eval) return cmd_eval(eval_args);
    } catch (const UsageError& e) {
        std::cerr << "dupseek: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParameterError& e) {
        std::cerr << "dupseek: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "dupseek: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "dupseek: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

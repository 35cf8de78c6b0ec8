#include "dupseek/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dupseek/errors.hpp"

namespace dupseek {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

ordered_json match_array(const std::vector<RankedMatch>& matches) {
    ordered_json arr = ordered_json::array();
    for (const auto& m : matches) arr.push_back({{"id", m.doc_id}, {"score", m.score}});
    return arr;
}

}  // namespace

std::string report_to_machine(const RetrievalReport& report) {
    ordered_json j;
    j["format"] = kReportFormat;
    j["query_id"] = report.query_id;
    j["verdict"] = to_string(report.verdict);
    j["threshold"] = report.diagnostics.threshold;
    j["matches"] = match_array(report.ranked);
    std::vector<RankedMatch> dups;
    if (report.duplicates) {
        for (const auto& m : report.duplicates->matches) dups.push_back({m.doc_id, m.score});
    }
    j["duplicates"] = match_array(dups);
    const Diagnostics& d = report.diagnostics;
    j["diagnostics"] = {{"dropped_terms", d.dropped_terms},
                        {"requested_topics", d.requested_topics},
                        {"effective_topics", d.effective_topics},
                        {"degenerate_query", d.degenerate_query},
                        {"warnings", d.warnings}};
    return j.dump(2) + "\n";
}

RetrievalReport report_from_machine(std::string_view text, std::string_view source) {
    auto fail = [&](const std::string& what) {
        return FormatError(what, std::filesystem::path(source), 0);
    };
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw fail(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kReportFormat) {
            throw fail("unsupported report format");
        }
        RetrievalReport r;
        r.query_id = j.at("query_id").get<std::string>();
        const auto verdict = j.at("verdict").get<std::string>();
        if (verdict != "duplicate" && verdict != "unique") throw fail("bad verdict " + verdict);
        r.verdict = verdict == "duplicate" ? Verdict::duplicate : Verdict::unique;
        for (const auto& m : j.at("matches")) {
            r.ranked.push_back({m.at("id").get<std::string>(), m.at("score").get<double>()});
        }
        if (r.verdict == Verdict::duplicate) {
            DuplicateEntry entry{r.query_id, {}};
            for (const auto& m : j.at("duplicates")) {
                entry.matches.push_back(
                    {m.at("id").get<std::string>(), m.at("score").get<double>()});
            }
            r.duplicates = std::move(entry);
        }
        const auto& d = j.at("diagnostics");
        r.diagnostics.threshold = j.at("threshold").get<double>();
        r.diagnostics.dropped_terms = d.at("dropped_terms").get<std::size_t>();
        r.diagnostics.requested_topics = d.at("requested_topics").get<std::size_t>();
        r.diagnostics.effective_topics = d.at("effective_topics").get<std::size_t>();
        r.diagnostics.degenerate_query = d.at("degenerate_query").get<bool>();
        r.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw fail(std::string("malformed report: ") + e.what());
    }
}

std::string report_to_text(const RetrievalReport& report, std::size_t max_rows) {
    const Diagnostics& d = report.diagnostics;
    std::set<std::string> dup_ids;
    if (report.duplicates) {
        for (const auto& m : report.duplicates->matches) dup_ids.insert(m.doc_id);
    }

    std::ostringstream out;
    out << "query " << report.query_id << ": "
        << (report.verdict == Verdict::duplicate ? "DUPLICATE" : "unique") << " (threshold "
        << fixed(d.threshold, 2) << ", topics " << d.effective_topics << ")\n";
    out << "  rank  report            score\n";
    const std::size_t rows = std::min(max_rows, report.ranked.size());
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& m = report.ranked[i];
        char line[128];
        std::snprintf(line, sizeof line, "  %4zu  %-16s %8s%s\n", i + 1, m.doc_id.c_str(),
                      fixed(m.score, 5).c_str(), dup_ids.count(m.doc_id) ? "  *" : "");
        out << line;
    }
    if (rows < report.ranked.size()) {
        out << "  ... " << report.ranked.size() - rows << " more\n";
    }
    if (report.duplicates) {
        out << "duplicate of:";
        for (const auto& m : report.duplicates->matches) {
            out << ' ' << m.doc_id << " (" << fixed(m.score, 5) << ")";
        }
        out << '\n';
    }
    if (d.dropped_terms > 0) {
        out << "terms not in the master set: " << d.dropped_terms << '\n';
    }
    for (const auto& w : d.warnings) out << "warning: " << w << '\n';
    return out.str();
}

std::string similarity_to_dot(const RetrievalReport& report) {
    std::set<std::string> dup_ids;
    if (report.duplicates) {
        for (const auto& m : report.duplicates->matches) dup_ids.insert(m.doc_id);
    }
    const std::string query_node = "query:" + report.query_id;

    std::ostringstream dot;
    dot << "digraph similarity {\n"
        << "  rankdir=LR;\n"
        << "  node [shape=ellipse, fontname=\"Helvetica\"];\n"
        << "  " << dot_quote(query_node) << " [label=" << dot_quote(report.query_id)
        << ", shape=box, style=filled, fillcolor=\"greenyellow\"];\n";
    for (const auto& m : report.ranked) {
        dot << "  " << dot_quote(m.doc_id) << " [label=" << dot_quote(m.doc_id);
        if (dup_ids.count(m.doc_id)) dot << ", style=filled, fillcolor=\"pink\"";
        dot << "];\n";
    }
    for (const auto& m : report.ranked) {
        dot << "  " << dot_quote(query_node) << " -> " << dot_quote(m.doc_id)
            << " [label=" << dot_quote(fixed(m.score, 5));
        if (dup_ids.count(m.doc_id)) dot << ", color=\"red\", penwidth=2.0";
        dot << "];\n";
    }
    dot << "}\n";
    return dot.str();
}

SimilarityMatrix report_similarity_matrix(const RetrievalReport& report) {
    SimilarityMatrix csm;
    csm.query_ids = {report.query_id};
    csm.scores.resize(1, static_cast<Eigen::Index>(report.ranked.size()));
    for (std::size_t i = 0; i < report.ranked.size(); ++i) {
        csm.doc_ids.push_back(report.ranked[i].doc_id);
        csm.scores(0, static_cast<Eigen::Index>(i)) = report.ranked[i].score;
    }
    return csm;
}

std::string report_poset_dot(const RetrievalReport& report) {
    return poset_to_dot(
        build_aoc_poset(binarize(report_similarity_matrix(report), report.diagnostics.threshold)));
}

std::string metrics_to_machine(const ExperimentResult& result, const PipelineConfig& config) {
    ordered_json j;
    j["format"] = "dupseek-metrics v1";
    j["threshold"] = config.threshold;
    if (config.topics) {
        j["topics"] = *config.topics;
    } else {
        j["topics"] = nullptr;
    }
    j["recall"] = result.aggregate.recall;
    j["precision"] = result.aggregate.precision;
    j["f_measure"] = result.aggregate.f_measure;
    j["relevant"] = result.relevant_total;
    j["retrieved"] = result.retrieved_total;
    j["hits"] = result.hits_total;
    ordered_json queries = ordered_json::array();
    for (const auto& q : result.queries) {
        ordered_json e;
        e["query_id"] = q.query_id;
        e["relevant"] = q.relevant;
        e["retrieved"] = q.retrieved;
        e["recall"] = q.metrics.recall;
        e["precision"] = q.metrics.precision;
        e["f_measure"] = q.metrics.f_measure;
        if (q.top_match) {
            e["top_match"] = {{"id", q.top_match->doc_id}, {"score", q.top_match->score}};
        } else {
            e["top_match"] = nullptr;
        }
        queries.push_back(std::move(e));
    }
    j["queries"] = std::move(queries);
    if (result.unlabeled_flagged) {
        j["unlabeled_scanned"] = result.unlabeled_scanned;
        j["unlabeled_flagged"] = *result.unlabeled_flagged;
    }
    return j.dump(2) + "\n";
}

std::string metrics_to_text(const ExperimentResult& result, std::string_view dataset) {
    auto pct = [](double v) { return fixed(100.0 * v, 1) + "%"; };
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %10s %10s %10s\n", "Data set", "Recall", "Precision",
                  "F-measure");
    out << line;
    std::snprintf(line, sizeof line, "%-20.20s %10s %10s %10s\n", std::string(dataset).c_str(),
                  pct(result.aggregate.recall).c_str(), pct(result.aggregate.precision).c_str(),
                  pct(result.aggregate.f_measure).c_str());
    out << line;
    out << "\nper query:\n";
    for (const auto& q : result.queries) {
        out << "  " << q.query_id << ": recall " << fixed(q.metrics.recall, 3) << ", precision "
            << fixed(q.metrics.precision, 3) << ", retrieved {";
        bool first = true;
        for (const auto& id : q.retrieved) {
            out << (first ? "" : ", ") << id;
            first = false;
        }
        out << "}";
        if (q.top_match) {
            out << ", top " << q.top_match->doc_id << " (" << fixed(q.top_match->score, 5) << ")";
        }
        out << '\n';
    }
    if (result.unlabeled_flagged) {
        out << "\nunlabeled reports flagged as duplicates: " << *result.unlabeled_flagged << " of "
            << result.unlabeled_scanned << '\n';
    }
    return out.str();
}

}  // namespace dupseek

#include "dupseek/eval.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "dupseek/errors.hpp"
#include "text_util.hpp"

namespace dupseek {
namespace {

std::size_t intersection_size(const IdSet& a, const IdSet& b) {
    std::size_t n = 0;
    for (const auto& id : a) n += b.count(id);
    return n;
}

IdSet retrieved_ids(const RetrievalReport& report) {
    IdSet ids;
    if (report.duplicates) {
        for (const auto& m : report.duplicates->matches) ids.insert(m.doc_id);
    }
    return ids;
}

}  // namespace

GroundTruth::GroundTruth(std::vector<std::pair<std::string, std::string>> pairs)
    : pairs_(std::make_move_iterator(pairs.begin()), std::make_move_iterator(pairs.end())) {}

GroundTruth GroundTruth::load(const std::filesystem::path& path) {
    std::istringstream in(detail::read_file(path));
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto body = detail::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw FormatError("expected 'query_id<TAB>duplicate_id'", path, lineno);
        }
        std::string query(detail::trim(std::string_view(line).substr(0, tab)));
        std::string dup(detail::trim(std::string_view(line).substr(tab + 1)));
        if (query.empty() || dup.empty()) {
            throw FormatError("empty id", path, lineno);
        }
        pairs.emplace_back(std::move(query), std::move(dup));
    }
    return GroundTruth(std::move(pairs));
}

std::vector<std::string> GroundTruth::queries() const {
    std::vector<std::string> out;
    for (const auto& [q, d] : pairs_) {
        if (out.empty() || out.back() != q) out.push_back(q);
    }
    return out;
}

IdSet GroundTruth::relevant_for(const std::string& query_id) const {
    IdSet out;
    for (auto it = pairs_.lower_bound({query_id, ""}); it != pairs_.end() && it->first == query_id;
         ++it) {
        out.insert(it->second);
    }
    return out;
}

void GroundTruth::validate_against(const Corpus& corpus) const {
    for (const auto& q : queries()) {
        if (!corpus.contains(q)) {
            throw DataError("ground-truth query " + q + " is not in the corpus");
        }
    }
}

double recall(const IdSet& relevant, const IdSet& retrieved) {
    if (relevant.empty()) {
        throw ParameterError("undefined recall: no relevant reports");
    }
    return static_cast<double>(intersection_size(relevant, retrieved)) /
           static_cast<double>(relevant.size());
}

double precision(const IdSet& relevant, const IdSet& retrieved) {
    if (retrieved.empty()) return relevant.empty() ? 1.0 : 0.0;
    return static_cast<double>(intersection_size(relevant, retrieved)) /
           static_cast<double>(retrieved.size());
}

double f_measure(double p, double r) {
    if (p + r == 0.0) return 0.0;
    return 2.0 * p * r / (p + r);
}

ExperimentResult run_experiment(const Corpus& corpus, const GroundTruth& truth,
                                const PipelineConfig& config, ExperimentOptions options) {
    truth.validate_against(corpus);

    ExperimentResult result;
    for (const auto& query_id : truth.queries()) {
        const BugReport& query = *corpus.find(query_id);
        const DuplicateDetector detector(corpus.without(query_id), config);
        const RetrievalReport report = detector.check(query);

        QueryOutcome outcome;
        outcome.query_id = query_id;
        outcome.relevant = truth.relevant_for(query_id);
        outcome.retrieved = retrieved_ids(report);
        const double p = precision(outcome.relevant, outcome.retrieved);
        const double r = recall(outcome.relevant, outcome.retrieved);
        outcome.metrics = {r, p, f_measure(p, r)};
        if (!report.ranked.empty()) outcome.top_match = report.ranked.front();

        result.relevant_total += outcome.relevant.size();
        result.retrieved_total += outcome.retrieved.size();
        result.hits_total += intersection_size(outcome.relevant, outcome.retrieved);
        result.queries.push_back(std::move(outcome));
    }

    if (result.relevant_total > 0) {
        const double r = static_cast<double>(result.hits_total) /
                         static_cast<double>(result.relevant_total);
        const double p = result.retrieved_total == 0
                             ? 0.0
                             : static_cast<double>(result.hits_total) /
                                   static_cast<double>(result.retrieved_total);
        result.aggregate = {r, p, f_measure(p, r)};
    }

    if (options.scan_unlabeled) {
        const auto labeled = truth.queries();
        std::size_t flagged = 0;
        for (const auto& report : corpus) {
            if (std::binary_search(labeled.begin(), labeled.end(), report.id)) continue;
            const DuplicateDetector detector(corpus.without(report.id), config);
            if (detector.check(report).verdict == Verdict::duplicate) ++flagged;
            ++result.unlabeled_scanned;
        }
        result.unlabeled_flagged = flagged;
    }
    return result;
}

}  // namespace dupseek

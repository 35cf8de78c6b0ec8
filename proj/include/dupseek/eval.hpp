#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dupseek/bug_report.hpp"
#include "dupseek/pipeline.hpp"

namespace dupseek {

using IdSet = std::set<std::string>;

/// Labeled (query id, duplicate-of id) pairs.
class GroundTruth {
public:
    GroundTruth() = default;
    explicit GroundTruth(std::vector<std::pair<std::string, std::string>> pairs);

    /// Lines of `query_id<TAB>duplicate_id`; blank lines and `#` comments skipped.
    static GroundTruth load(const std::filesystem::path& path);

    const std::set<std::pair<std::string, std::string>>& pairs() const noexcept { return pairs_; }
    /// Distinct query ids in ascending order.
    std::vector<std::string> queries() const;
    IdSet relevant_for(const std::string& query_id) const;

    /// Throws DataError naming the first id missing from `corpus`.
    void validate_against(const Corpus& corpus) const;

private:
    std::set<std::pair<std::string, std::string>> pairs_;
};

struct EvalMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f_measure = 0.0;

    bool operator==(const EvalMetrics&) const = default;
};

/// |relevant ∩ retrieved| / |relevant|. Throws ParameterError ("undefined recall") if relevant is empty.
double recall(const IdSet& relevant, const IdSet& retrieved);

/// |relevant ∩ retrieved| / |retrieved|; with nothing retrieved, 1 if nothing is relevant else 0.
double precision(const IdSet& relevant, const IdSet& retrieved);

/// 2pr / (p + r), or 0 when p + r == 0.
double f_measure(double p, double r);

struct QueryOutcome {
    std::string query_id;
    IdSet relevant;
    IdSet retrieved;
    EvalMetrics metrics;
    std::optional<RankedMatch> top_match;
};

struct ExperimentResult {
    std::vector<QueryOutcome> queries;
    /// Micro-averaged over all labeled queries.
    EvalMetrics aggregate;
    std::size_t relevant_total = 0;
    std::size_t retrieved_total = 0;
    std::size_t hits_total = 0;
    /// Reports outside the ground truth that were flagged as duplicates.
    /// Set only when the unlabeled scan is requested.
    std::optional<std::size_t> unlabeled_flagged;
    std::size_t unlabeled_scanned = 0;
};

struct ExperimentOptions {
    bool scan_unlabeled = false;
};

/// Leave-one-out: each labeled query is removed from the corpus, the index is
/// rebuilt on the remainder and the query is checked against it.
///
/// The topic count, when not configured, is default_k(corpus.size()) for every
/// run, so it matches the count used for the full data set.
ExperimentResult run_experiment(const Corpus& corpus, const GroundTruth& truth,
                                const PipelineConfig& config, ExperimentOptions options = {});

}  // namespace dupseek

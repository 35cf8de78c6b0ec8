#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dupseek/bug_report.hpp"
#include "dupseek/fca.hpp"
#include "dupseek/lsi.hpp"
#include "dupseek/preprocess.hpp"

namespace dupseek {

inline constexpr double kDefaultThreshold = 0.80;

struct PipelineConfig {
    double threshold = kDefaultThreshold;
    /// Unset: default_k(corpus size + 1), capped at min(terms, documents).
    std::optional<std::size_t> topics;
    StopWordList stop_words = StopWordList::english();
};

struct RankedMatch {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const RankedMatch&) const = default;
};

enum class Verdict { unique, duplicate };

const char* to_string(Verdict v);

struct Diagnostics {
    std::size_t dropped_terms = 0;
    std::size_t requested_topics = 0;
    std::size_t effective_topics = 0;
    double threshold = kDefaultThreshold;
    bool degenerate_query = false;
    std::vector<std::string> warnings;

    bool operator==(const Diagnostics&) const = default;
};

/// Outcome of checking one new report against the master set.
struct RetrievalReport {
    std::string query_id;
    /// All corpus reports, score descending, ties by ascending id.
    std::vector<RankedMatch> ranked;
    Verdict verdict = Verdict::unique;
    /// Present iff verdict is duplicate.
    std::optional<DuplicateEntry> duplicates;
    Diagnostics diagnostics;

    bool operator==(const RetrievalReport&) const = default;
};

/// Everything computed for one query, for callers that need the matrices.
struct CheckResult {
    RetrievalReport report;
    SimilarityMatrix csm;
    AocPoset poset;
};

/// Index over a master report set. Building runs preprocessing and the SVD;
/// check() is const and may be called concurrently.
class DuplicateDetector {
public:
    /// Throws DataError for fewer than two reports or an empty vocabulary,
    /// ParameterError for an out-of-range threshold or topic count.
    DuplicateDetector(const Corpus& corpus, PipelineConfig config);

    CheckResult check_detailed(const BugReport& query) const;
    RetrievalReport check(const BugReport& query) const { return check_detailed(query).report; }

    const Vocabulary& vocabulary() const noexcept { return vocab_; }
    const TermDocumentMatrix& tdm() const noexcept { return tdm_; }
    const LsiModel& model() const noexcept { return model_; }
    const PipelineConfig& config() const noexcept { return config_; }

    /// Runs preprocessing and vectorization only.
    QueryVector vectorize(const BugReport& query) const;

private:
    PipelineConfig config_;
    Vocabulary vocab_;
    TermDocumentMatrix tdm_;
    LsiModel model_;
    std::vector<std::string> build_warnings_;
};

/// Ranked list ordering: score descending, then id ascending.
std::vector<RankedMatch> rank_scores(const SimilarityMatrix& csm, std::size_t row);

}  // namespace dupseek

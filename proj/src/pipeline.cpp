#include "dupseek/pipeline.hpp"

#include <algorithm>
#include <array>

#include "dupseek/errors.hpp"

namespace dupseek {

const char* to_string(Verdict v) {
    return v == Verdict::duplicate ? "duplicate" : "unique";
}

DuplicateDetector::DuplicateDetector(const Corpus& corpus, PipelineConfig config)
    : config_(std::move(config)) {
    if (!(config_.threshold >= 0.0 && config_.threshold <= 1.0)) {
        throw ParameterError("threshold must lie in [0, 1]");
    }
    if (corpus.size() < 2) {
        throw DataError("the master set needs at least two reports, found " +
                        std::to_string(corpus.size()));
    }

    std::vector<ProcessedDocument> docs;
    docs.reserve(corpus.size());
    for (const auto& r : corpus) {
        docs.push_back(preprocess_report(r, config_.stop_words));
        if (docs.back().tokens.empty()) {
            build_warnings_.push_back("report " + r.id + " has no indexable terms");
        }
    }
    vocab_ = build_vocabulary(docs);
    tdm_ = build_tdm(docs, vocab_);

    const std::size_t max_k = std::min(vocab_.size(), docs.size());
    std::size_t k = 0;
    if (config_.topics) {
        k = *config_.topics;
    } else {
        k = default_k(corpus.size() + 1);
        if (k > max_k) {
            build_warnings_.push_back("default topic count " + std::to_string(k) +
                                      " capped at " + std::to_string(max_k));
            k = max_k;
        }
    }
    model_ = truncated_svd(tdm_, k);
    if (!config_.topics) model_.requested_topics = default_k(corpus.size() + 1);
}

QueryVector DuplicateDetector::vectorize(const BugReport& query) const {
    return build_query_vector(preprocess_report(query, config_.stop_words), vocab_);
}

std::vector<RankedMatch> rank_scores(const SimilarityMatrix& csm, std::size_t row) {
    std::vector<RankedMatch> ranked;
    ranked.reserve(csm.doc_ids.size());
    for (std::size_t d = 0; d < csm.doc_ids.size(); ++d) {
        ranked.push_back(
            {csm.doc_ids[d],
             csm.scores(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(d))});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedMatch& a, const RankedMatch& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    return ranked;
}

CheckResult DuplicateDetector::check_detailed(const BugReport& query) const {
    const QueryVector qv = vectorize(query);
    const std::array<QueryVector, 1> queries{qv};
    SimilarityMatrix csm = compute_csm(model_, queries);
    AocPoset poset = build_aoc_poset(binarize(csm, config_.threshold));
    const DuplicateList dups = extract_duplicates(poset, csm, config_.threshold);

    RetrievalReport report;
    report.query_id = query.id;
    report.ranked = rank_scores(csm, 0);
    if (const auto* entry = dups.find(query.id)) {
        report.verdict = Verdict::duplicate;
        report.duplicates = *entry;
    }

    Diagnostics& diag = report.diagnostics;
    diag.dropped_terms = qv.dropped_terms;
    diag.requested_topics = model_.requested_topics;
    diag.effective_topics = model_.topics();
    diag.threshold = config_.threshold;
    diag.degenerate_query = qv.degenerate();
    diag.warnings = build_warnings_;
    diag.warnings.insert(diag.warnings.end(), model_.warnings.begin(), model_.warnings.end());
    if (qv.degenerate()) {
        diag.warnings.push_back("query " + query.id +
                                " shares no terms with the master set; treated as unique");
    }
    return {std::move(report), std::move(csm), std::move(poset)};
}

}  // namespace dupseek

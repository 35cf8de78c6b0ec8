#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "dupseek/preprocess.hpp"

namespace dupseek {

/// Distinct corpus terms in order of first appearance.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> terms);

    const std::vector<std::string>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    std::optional<std::size_t> index_of(std::string_view term) const;

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Raw term frequencies, terms x documents.
struct TermDocumentMatrix {
    Eigen::MatrixXi counts;
    std::vector<std::string> doc_ids;
};

/// Raw term frequencies of one query over the corpus vocabulary.
struct QueryVector {
    Eigen::VectorXi counts;
    std::string query_id;
    /// Query tokens that are not in the vocabulary.
    std::size_t dropped_terms = 0;

    bool degenerate() const { return counts.isZero(); }
};

/// Rank-K truncated SVD of a term-document matrix.
struct LsiModel {
    Eigen::MatrixXd term_vectors;     ///< r x K, orthonormal columns (U_k)
    Eigen::VectorXd singular_values;  ///< K, positive, non-increasing (S_k)
    Eigen::MatrixXd doc_vectors;      ///< i x K, orthonormal columns (V_k)
    std::vector<std::string> doc_ids;
    std::size_t requested_topics = 0;
    std::vector<std::string> warnings;

    std::size_t topics() const noexcept {
        return static_cast<std::size_t>(singular_values.size());
    }
};

/// Cosine scores, queries x corpus documents.
struct SimilarityMatrix {
    Eigen::MatrixXd scores;
    std::vector<std::string> query_ids;
    std::vector<std::string> doc_ids;
};

/// Throws DataError ("empty vocabulary") when no document has a token.
Vocabulary build_vocabulary(std::span<const ProcessedDocument> docs);

/// Throws ParameterError for an empty document list.
TermDocumentMatrix build_tdm(std::span<const ProcessedDocument> docs, const Vocabulary& vocab);

QueryVector build_query_vector(const ProcessedDocument& query, const Vocabulary& vocab);

/// Top-k singular triplets of `tdm.counts`.
///
/// Throws ParameterError unless 1 <= k <= min(rows, cols) and the matrix is
/// nonzero. When the numerical rank is below k the model keeps only rank
/// triplets and records a warning. Each left singular vector is signed so
/// that its largest-magnitude entry is nonnegative.
LsiModel truncated_svd(const TermDocumentMatrix& tdm, std::size_t k);

/// Projects a query into the latent space: diag(S_k)^-1 * U_k^T * q.
/// Comparable with rows of V_k.
Eigen::VectorXd fold_in_query(const LsiModel& model, const QueryVector& query);

/// Cosine of two vectors, 0 when either has zero norm, clamped to [-1, 1].
/// Throws ParameterError on a dimension mismatch.
double cosine(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b);

/// scores(q, d) = cosine(fold_in_query(model, q), row d of V_k).
SimilarityMatrix compute_csm(const LsiModel& model, std::span<const QueryVector> queries);

/// min(n_docs - 1, 300). Throws ParameterError for n_docs < 2.
std::size_t default_k(std::size_t n_docs);

// CSV dumps laid out like the usual audit tables: a header row of report ids,
// one row per term (or per query for the similarity matrix).
void write_tdm_csv(std::ostream& out, const TermDocumentMatrix& tdm, const Vocabulary& vocab);
void write_query_csv(std::ostream& out, const QueryVector& query, const Vocabulary& vocab);
void write_csm_csv(std::ostream& out, const SimilarityMatrix& csm);

}  // namespace dupseek

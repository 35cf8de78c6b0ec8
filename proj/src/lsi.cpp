#include "dupseek/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include <Eigen/SVD>

#include "dupseek/errors.hpp"

namespace dupseek {
namespace {

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string fixed5(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!index_.emplace(terms_[i], i).second) {
            throw ParameterError("duplicate vocabulary term '" + terms_[i] + "'");
        }
    }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocabulary(std::span<const ProcessedDocument> docs) {
    std::vector<std::string> terms;
    std::unordered_set<std::string_view> seen;
    for (const auto& d : docs) {
        for (const auto& t : d.tokens) {
            if (seen.insert(t).second) terms.push_back(t);
        }
    }
    if (terms.empty()) {
        throw DataError("empty vocabulary: no document has any indexable term");
    }
    return Vocabulary(std::move(terms));
}

TermDocumentMatrix build_tdm(std::span<const ProcessedDocument> docs, const Vocabulary& vocab) {
    if (docs.empty()) {
        throw ParameterError("term-document matrix needs at least one document");
    }
    TermDocumentMatrix tdm;
    tdm.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(vocab.size()),
                                       static_cast<Eigen::Index>(docs.size()));
    tdm.doc_ids.reserve(docs.size());
    for (std::size_t j = 0; j < docs.size(); ++j) {
        tdm.doc_ids.push_back(docs[j].id);
        for (const auto& t : docs[j].tokens) {
            if (auto row = vocab.index_of(t)) {
                ++tdm.counts(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(j));
            }
        }
    }
    return tdm;
}

QueryVector build_query_vector(const ProcessedDocument& query, const Vocabulary& vocab) {
    QueryVector q;
    q.query_id = query.id;
    q.counts = Eigen::VectorXi::Zero(static_cast<Eigen::Index>(vocab.size()));
    for (const auto& t : query.tokens) {
        if (auto row = vocab.index_of(t)) {
            ++q.counts(static_cast<Eigen::Index>(*row));
        } else {
            ++q.dropped_terms;
        }
    }
    return q;
}

LsiModel truncated_svd(const TermDocumentMatrix& tdm, std::size_t k) {
    const auto rows = static_cast<std::size_t>(tdm.counts.rows());
    const auto cols = static_cast<std::size_t>(tdm.counts.cols());
    const std::size_t max_k = std::min(rows, cols);
    if (k < 1 || k > max_k) {
        throw ParameterError("topic count " + std::to_string(k) + " outside [1, " +
                             std::to_string(max_k) + "]");
    }
    if (tdm.counts.isZero()) {
        throw ParameterError("term-document matrix is all zeros");
    }

    const Eigen::MatrixXd a = tdm.counts.cast<double>();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();

    const double tol = s(0) * static_cast<double>(std::max(rows, cols)) *
                       std::numeric_limits<double>::epsilon();
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(s.size()) && s(static_cast<Eigen::Index>(rank)) > tol) {
        ++rank;
    }

    LsiModel model;
    model.requested_topics = k;
    model.doc_ids = tdm.doc_ids;
    std::size_t keep = k;
    if (rank < k) {
        keep = rank;
        model.warnings.push_back("matrix rank " + std::to_string(rank) +
                                 " is below the requested topic count " + std::to_string(k) +
                                 "; using " + std::to_string(rank));
    }
    const auto kk = static_cast<Eigen::Index>(keep);
    model.term_vectors = svd.matrixU().leftCols(kk);
    model.doc_vectors = svd.matrixV().leftCols(kk);
    model.singular_values = s.head(kk);

    for (Eigen::Index j = 0; j < kk; ++j) {
        Eigen::Index pivot = 0;
        model.term_vectors.col(j).cwiseAbs().maxCoeff(&pivot);
        if (model.term_vectors(pivot, j) < 0.0) {
            model.term_vectors.col(j) *= -1.0;
            model.doc_vectors.col(j) *= -1.0;
        }
    }
    return model;
}

Eigen::VectorXd fold_in_query(const LsiModel& model, const QueryVector& query) {
    if (query.counts.size() != model.term_vectors.rows()) {
        throw ParameterError("query vector length does not match the model vocabulary");
    }
    if (query.degenerate()) {
        return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.topics()));
    }
    const Eigen::VectorXd projected =
        model.term_vectors.transpose() * query.counts.cast<double>();
    return projected.cwiseQuotient(model.singular_values);
}

double cosine(const Eigen::Ref<const Eigen::VectorXd>& a,
              const Eigen::Ref<const Eigen::VectorXd>& b) {
    if (a.size() != b.size()) {
        throw ParameterError("cosine of vectors with different dimensions");
    }
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    const double c = a.dot(b) / (na * nb);
    return std::clamp(c, -1.0, 1.0);
}

SimilarityMatrix compute_csm(const LsiModel& model, std::span<const QueryVector> queries) {
    SimilarityMatrix csm;
    csm.doc_ids = model.doc_ids;
    const auto n_docs = model.doc_vectors.rows();
    csm.scores = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(queries.size()), n_docs);
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
        csm.query_ids.push_back(queries[qi].query_id);
        const Eigen::VectorXd latent = fold_in_query(model, queries[qi]);
        for (Eigen::Index d = 0; d < n_docs; ++d) {
            csm.scores(static_cast<Eigen::Index>(qi), d) =
                cosine(latent, model.doc_vectors.row(d).transpose());
        }
    }
    return csm;
}

std::size_t default_k(std::size_t n_docs) {
    if (n_docs < 2) {
        throw ParameterError("at least two reports are needed to pick a topic count");
    }
    return std::min<std::size_t>(n_docs - 1, 300);
}

void write_tdm_csv(std::ostream& out, const TermDocumentMatrix& tdm, const Vocabulary& vocab) {
    out << "term";
    for (const auto& id : tdm.doc_ids) out << ',' << csv_field(id);
    out << '\n';
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        out << csv_field(vocab.terms()[t]);
        for (Eigen::Index d = 0; d < tdm.counts.cols(); ++d) {
            out << ',' << tdm.counts(static_cast<Eigen::Index>(t), d);
        }
        out << '\n';
    }
}

void write_query_csv(std::ostream& out, const QueryVector& query, const Vocabulary& vocab) {
    out << "term," << csv_field(query.query_id) << '\n';
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        out << csv_field(vocab.terms()[t]) << ','
            << query.counts(static_cast<Eigen::Index>(t)) << '\n';
    }
}

void write_csm_csv(std::ostream& out, const SimilarityMatrix& csm) {
    out << "query";
    for (const auto& id : csm.doc_ids) out << ',' << csv_field(id);
    out << '\n';
    for (std::size_t q = 0; q < csm.query_ids.size(); ++q) {
        out << csv_field(csm.query_ids[q]);
        for (Eigen::Index d = 0; d < csm.scores.cols(); ++d) {
            out << ',' << fixed5(csm.scores(static_cast<Eigen::Index>(q), d));
        }
        out << '\n';
    }
}

}  // namespace dupseek

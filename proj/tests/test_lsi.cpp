#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "dupseek/errors.hpp"
#include "dupseek/lsi.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace dupseek;

namespace {

struct DsaIndex {
    std::vector<ProcessedDocument> docs;
    ProcessedDocument query;
    Vocabulary vocab;
    TermDocumentMatrix tdm;
};

DsaIndex dsa_index() {
    const auto dsa = testing::dsa();
    DsaIndex ix;
    for (const auto& r : dsa.master) ix.docs.push_back(preprocess_report(r, StopWordList::english()));
    ix.query = preprocess_report(dsa.query, StopWordList::english());
    ix.vocab = build_vocabulary(ix.docs);
    ix.tdm = build_tdm(ix.docs, ix.vocab);
    return ix;
}

int count_of(const TermDocumentMatrix& tdm, const Vocabulary& vocab, const std::string& term,
             const std::string& doc) {
    const auto col = std::find(tdm.doc_ids.begin(), tdm.doc_ids.end(), doc) - tdm.doc_ids.begin();
    return tdm.counts(static_cast<Eigen::Index>(*vocab.index_of(term)), col);
}

TermDocumentMatrix tdm_of(const oracle::Matrix& m) {
    TermDocumentMatrix tdm;
    tdm.counts.resize(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(m[0].size()));
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m[0].size(); ++c) {
            tdm.counts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                static_cast<int>(m[r][c]);
        }
    }
    for (std::size_t c = 0; c < m[0].size(); ++c) tdm.doc_ids.push_back("d" + std::to_string(c));
    return tdm;
}

Eigen::MatrixXd reconstruct(const LsiModel& m) {
    return m.term_vectors * m.singular_values.asDiagonal() * m.doc_vectors.transpose();
}

QueryVector column_query(const TermDocumentMatrix& tdm, Eigen::Index col) {
    QueryVector q;
    q.counts = tdm.counts.col(col);
    q.query_id = "q";
    return q;
}

}  // namespace

TEST_CASE("vocabulary keeps first-appearance order") {
    const std::vector<ProcessedDocument> docs{{"1", {"a", "b", "a"}}};
    CHECK(build_vocabulary(docs).terms() == std::vector<std::string>{"a", "b"});
    const std::vector<ProcessedDocument> empty{{"1", {}}, {"2", {}}};
    CHECK_THROWS_AS(build_vocabulary(empty), DataError);
    CHECK_THROWS_AS(build_tdm({}, Vocabulary({"a"})), ParameterError);
}

TEST_CASE("DSA vocabulary and term-document counts") {
    const auto ix = dsa_index();
    for (const char* t : {"method", "art", "site", "mouse", "wheel", "pixel", "function", "content",
                          "draw", "oval", "image", "slow"}) {
        CHECK_MESSAGE(ix.vocab.index_of(t).has_value(), t);
    }
    CHECK(count_of(ix.tdm, ix.vocab, "draw", "000002") == 3);
    CHECK(count_of(ix.tdm, ix.vocab, "oval", "000002") == 3);
    CHECK(count_of(ix.tdm, ix.vocab, "mouse", "000006") == 3);
    CHECK(ix.tdm.counts.rows() == static_cast<Eigen::Index>(ix.vocab.size()));
    CHECK(ix.tdm.counts.cols() == 6);
}

TEST_CASE("column sums equal in-vocabulary token counts") {
    const auto ix = dsa_index();
    for (std::size_t d = 0; d < ix.docs.size(); ++d) {
        const auto expected = std::count_if(ix.docs[d].tokens.begin(), ix.docs[d].tokens.end(),
                                            [&](const auto& t) { return ix.vocab.index_of(t).has_value(); });
        CHECK(ix.tdm.counts.col(static_cast<Eigen::Index>(d)).sum() == expected);
    }
}

TEST_CASE("vocabulary membership ignores token order") {
    std::mt19937 rng(5);
    auto ix = dsa_index();
    const auto base = build_vocabulary(ix.docs).terms();
    for (int trial = 0; trial < 20; ++trial) {
        for (auto& d : ix.docs) std::shuffle(d.tokens.begin(), d.tokens.end(), rng);
        const auto terms = build_vocabulary(ix.docs).terms();
        CHECK(std::set<std::string>(terms.begin(), terms.end()) ==
              std::set<std::string>(base.begin(), base.end()));
    }
}

TEST_CASE("DSA query vector") {
    const auto ix = dsa_index();
    const QueryVector q = build_query_vector(ix.query, ix.vocab);
    const std::map<std::string, int> expected{{"scroll", 3}, {"art", 2},  {"wheel", 2},
                                              {"site", 2},   {"mouse", 2}, {"content", 1},
                                              {"use", 1},    {"well", 1}};
    int total = 0;
    for (const auto& [term, n] : expected) {
        CHECK_MESSAGE(q.counts(static_cast<Eigen::Index>(*ix.vocab.index_of(term))) == n, term);
        total += n;
    }
    CHECK(q.counts.sum() == total);
    CHECK_FALSE(q.degenerate());
    CHECK(build_query_vector({"e", {}}, ix.vocab).degenerate());
    const auto gib = build_query_vector({"g", {"zzzz", "qqqq"}}, ix.vocab);
    CHECK(gib.degenerate());
    CHECK(gib.dropped_terms == 2);
}

TEST_CASE("query identical to a document matches its column") {
    const auto ix = dsa_index();
    const auto q = build_query_vector(ix.docs[5], ix.vocab);
    CHECK(q.counts == ix.tdm.counts.col(5));
}

TEST_CASE("diagonal SVD") {
    const auto tdm = tdm_of({{3, 0}, {0, 1}});
    const auto m = truncated_svd(tdm, 1);
    REQUIRE(m.topics() == 1);
    CHECK(m.singular_values(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(m.term_vectors(0, 0) == doctest::Approx(1.0));
    CHECK(m.term_vectors(1, 0) == doctest::Approx(0.0));
    CHECK(std::abs(m.doc_vectors(0, 0)) == doctest::Approx(1.0));
    CHECK(m.doc_vectors(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("SVD parameter errors and rank reduction") {
    const auto tdm = tdm_of({{1, 2, 3}, {2, 4, 6}});
    CHECK_THROWS_AS(truncated_svd(tdm, 0), ParameterError);
    CHECK_THROWS_AS(truncated_svd(tdm, 3), ParameterError);
    CHECK_THROWS_AS(truncated_svd(tdm_of({{0, 0}, {0, 0}}), 1), ParameterError);
    const auto m = truncated_svd(tdm, 2);
    CHECK(m.requested_topics == 2);
    CHECK(m.topics() == 1);
    CHECK(m.warnings.size() == 1);
}

TEST_CASE("DSA singular values match the oracle") {
    const auto ix = dsa_index();
    oracle::Matrix a(static_cast<std::size_t>(ix.tdm.counts.rows()),
                     std::vector<double>(static_cast<std::size_t>(ix.tdm.counts.cols())));
    for (std::size_t r = 0; r < a.size(); ++r) {
        for (std::size_t c = 0; c < a[0].size(); ++c) {
            a[r][c] = ix.tdm.counts(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    const auto sv = oracle::singular_values(a);
    const auto m = truncated_svd(ix.tdm, 6);
    REQUIRE(m.topics() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(std::abs(m.singular_values(static_cast<Eigen::Index>(i)) - sv[i]) <= 1e-8);
    }
}

TEST_CASE("SVD properties on random integer matrices") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    for (int trial = 0; trial < 60; ++trial) {
        const auto a = oracle::random_int_matrix(rng, dim(rng) + 1, dim(rng), 4);
        const auto tdm = tdm_of(a);
        if (tdm.counts.isZero()) continue;
        const auto sv = oracle::singular_values(a);
        const auto full = static_cast<std::size_t>(std::min(tdm.counts.rows(), tdm.counts.cols()));
        const Eigen::MatrixXd dense = tdm.counts.cast<double>();
        double previous = std::numeric_limits<double>::infinity();
        for (std::size_t k = 1; k <= full; ++k) {
            const auto m = truncated_svd(tdm, k);
            const auto kk = static_cast<Eigen::Index>(m.topics());
            const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(kk, kk);
            REQUIRE((m.term_vectors.transpose() * m.term_vectors - id).norm() <= 1e-8);
            REQUIRE((m.doc_vectors.transpose() * m.doc_vectors - id).norm() <= 1e-8);
            for (Eigen::Index i = 0; i < kk; ++i) {
                REQUIRE(m.singular_values(i) > 0);
                if (i > 0) REQUIRE(m.singular_values(i) <= m.singular_values(i - 1));
                const auto col = m.term_vectors.col(i);
                Eigen::Index arg = 0;
                col.cwiseAbs().maxCoeff(&arg);
                REQUIRE(col(arg) >= 0);
            }
            const double err = (dense - reconstruct(m)).norm();
            REQUIRE(std::abs(err - oracle::eckart_young_error(sv, k)) <= 1e-6 * (1 + dense.norm()));
            REQUIRE(err <= previous + 1e-9);
            previous = err;
        }
        REQUIRE(previous <= 1e-8 * dense.norm());
    }
}

TEST_CASE("fold-in identity and linearity") {
    const auto ix = dsa_index();
    const auto m = truncated_svd(ix.tdm, 6);
    for (Eigen::Index d = 0; d < 6; ++d) {
        const auto qhat = fold_in_query(m, column_query(ix.tdm, d));
        CHECK(cosine(qhat, m.doc_vectors.row(d).transpose()) == doctest::Approx(1.0).epsilon(1e-8));
    }
    auto q = build_query_vector(ix.query, ix.vocab);
    const auto base = fold_in_query(m, q);
    QueryVector scaled = q;
    scaled.counts *= 5;
    CHECK((fold_in_query(m, scaled) - 5.0 * base).norm() <= 1e-12 * (1 + base.norm()));
    QueryVector zero = q;
    zero.counts.setZero();
    CHECK(fold_in_query(m, zero).isZero());
}

TEST_CASE("cosine") {
    Eigen::VectorXd a(2), b(2), c(2);
    a << 1, 0;
    b << 0, 1;
    c << 1, 1;
    CHECK(cosine(a, a) == doctest::Approx(1.0));
    CHECK(cosine(a, b) == 0.0);
    CHECK(std::abs(cosine(c, a) - 0.70710678) <= 1e-8);
    CHECK(cosine(Eigen::VectorXd::Zero(2), a) == 0.0);
    CHECK_THROWS_AS(cosine(a, Eigen::VectorXd::Ones(3)), ParameterError);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    std::uniform_real_distribution<double> pos(0.01, 100);
    for (int trial = 0; trial < 500; ++trial) {
        Eigen::VectorXd x(5), y(5);
        for (int i = 0; i < 5; ++i) {
            x(i) = u(rng);
            y(i) = u(rng);
        }
        const double c0 = cosine(x, y);
        REQUIRE(c0 == cosine(y, x));
        REQUIRE(std::abs(cosine(pos(rng) * x, pos(rng) * y) - c0) <= 1e-10);
        REQUIRE(std::abs(cosine(x, x) - 1.0) <= 1e-12);
    }
}

TEST_CASE("DSA similarity row") {
    const auto ix = dsa_index();
    const auto m = truncated_svd(ix.tdm, 6);
    const std::vector<QueryVector> queries{build_query_vector(ix.query, ix.vocab)};
    const auto csm = compute_csm(m, queries);
    REQUIRE(csm.scores.rows() == 1);
    REQUIRE(csm.scores.cols() == 6);
    Eigen::Index arg = 0;
    csm.scores.row(0).maxCoeff(&arg);
    CHECK(csm.doc_ids[static_cast<std::size_t>(arg)] == "000006");
    CHECK(csm.scores(0, 5) >= 0.95);
    for (Eigen::Index d = 0; d < 5; ++d) CHECK(std::abs(csm.scores(0, d)) <= 0.10);
}

TEST_CASE("similarity scores stay finite and bounded on adversarial corpora") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<std::size_t> dim(2, 7);
    std::uniform_int_distribution<int> coin(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = oracle::random_int_matrix(rng, dim(rng), dim(rng), 3);
        // Zero out or duplicate some columns.
        for (std::size_t c = 1; c < a[0].size(); ++c) {
            const int pick = coin(rng);
            for (auto& row : a) {
                if (pick == 0) row[c] = 0;
                if (pick == 1) row[c] = row[c - 1];
            }
        }
        const auto tdm = tdm_of(a);
        if (tdm.counts.isZero()) continue;
        const auto k = static_cast<std::size_t>(std::min(tdm.counts.rows(), tdm.counts.cols()));
        const auto m = truncated_svd(tdm, k);
        std::vector<QueryVector> queries;
        for (Eigen::Index c = 0; c < tdm.counts.cols(); ++c) queries.push_back(column_query(tdm, c));
        QueryVector zero = queries[0];
        zero.counts.setZero();
        queries.push_back(zero);
        const auto csm = compute_csm(m, queries);
        REQUIRE(csm.scores.allFinite());
        REQUIRE(csm.scores.maxCoeff() <= 1.0);
        REQUIRE(csm.scores.minCoeff() >= -1.0);
        REQUIRE(csm.scores.row(csm.scores.rows() - 1).isZero());
        for (Eigen::Index c = 1; c < tdm.counts.cols(); ++c) {
            if (tdm.counts.col(c) == tdm.counts.col(c - 1) && !tdm.counts.col(c).isZero()) {
                REQUIRE(std::abs(cosine(m.doc_vectors.row(c).transpose(),
                                        m.doc_vectors.row(c - 1).transpose()) - 1.0) <= 1e-6);
            }
        }
    }
}

TEST_CASE("permuting corpus documents permutes similarity columns") {
    auto ix = dsa_index();
    const auto query = build_query_vector(ix.query, ix.vocab);
    const auto base = compute_csm(truncated_svd(ix.tdm, 5), std::vector<QueryVector>{query});
    std::mt19937 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        auto docs = ix.docs;
        std::shuffle(docs.begin(), docs.end(), rng);
        const auto tdm = build_tdm(docs, ix.vocab);
        const auto csm = compute_csm(truncated_svd(tdm, 5), std::vector<QueryVector>{query});
        for (std::size_t j = 0; j < docs.size(); ++j) {
            const auto orig = std::find(base.doc_ids.begin(), base.doc_ids.end(), csm.doc_ids[j]) -
                              base.doc_ids.begin();
            CHECK(std::abs(csm.scores(0, static_cast<Eigen::Index>(j)) - base.scores(0, orig)) <= 1e-9);
        }
    }
}

TEST_CASE("default topic count") {
    CHECK(default_k(7) == 6);
    CHECK(default_k(17) == 16);
    CHECK(default_k(1322) == 300);
    CHECK(default_k(2) == 1);
    CHECK_THROWS_AS(default_k(1), ParameterError);
    CHECK_THROWS_AS(default_k(0), ParameterError);
}

TEST_CASE("CSV dumps") {
    const auto ix = dsa_index();
    std::ostringstream tdm_csv;
    write_tdm_csv(tdm_csv, ix.tdm, ix.vocab);
    const auto text = tdm_csv.str();
    CHECK(text.rfind("term,000001,000002,000003,000004,000005,000006\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(ix.vocab.size() + 1));

    const auto m = truncated_svd(ix.tdm, 6);
    const std::vector<QueryVector> q{build_query_vector(ix.query, ix.vocab)};
    std::ostringstream csm_csv;
    write_csm_csv(csm_csv, compute_csm(m, q));
    CHECK(csm_csv.str().find("\n000007,") != std::string::npos);
}

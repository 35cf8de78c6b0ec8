#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "dupseek/lsi.hpp"

namespace dupseek {

/// Bit i set <=> object (or attribute) i belongs to the set.
using IndexSet = boost::dynamic_bitset<>;

/// Binary relation between queries (objects) and corpus reports (attributes).
class FormalContext {
public:
    FormalContext() = default;

    /// `relation[o][a]` tells whether object o has attribute a.
    /// Throws ParameterError on ragged rows or repeated ids.
    FormalContext(std::vector<std::string> objects, std::vector<std::string> attributes,
                  const std::vector<std::vector<bool>>& relation);

    const std::vector<std::string>& objects() const noexcept { return objects_; }
    const std::vector<std::string>& attributes() const noexcept { return attributes_; }
    std::size_t object_count() const noexcept { return objects_.size(); }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }

    bool related(std::size_t object, std::size_t attribute) const {
        return rows_[object].test(attribute);
    }
    const IndexSet& row(std::size_t object) const { return rows_[object]; }
    const IndexSet& column(std::size_t attribute) const { return columns_[attribute]; }

    /// Attributes shared by every object in `objects` (all attributes for the empty set).
    IndexSet derive_objects(const IndexSet& objects) const;
    /// Objects having every attribute in `attributes` (all objects for the empty set).
    IndexSet derive_attributes(const IndexSet& attributes) const;

    /// Id-based forms. Throw ParameterError on an unknown id.
    std::vector<std::string> derive_objects(std::span<const std::string> object_ids) const;
    std::vector<std::string> derive_attributes(std::span<const std::string> attribute_ids) const;

    IndexSet object_set(std::span<const std::string> ids) const;
    IndexSet attribute_set(std::span<const std::string> ids) const;
    std::vector<std::string> object_ids(const IndexSet& set) const;
    std::vector<std::string> attribute_ids(const IndexSet& set) const;

private:
    std::vector<std::string> objects_;
    std::vector<std::string> attributes_;
    std::vector<IndexSet> rows_;
    std::vector<IndexSet> columns_;
};

/// Relation is `score >= threshold`. Throws ParameterError unless threshold is in [0, 1].
FormalContext binarize(const SimilarityMatrix& csm, double threshold);

struct Concept {
    IndexSet extent;
    IndexSet intent;
    /// Objects whose object concept this is (smallest extent containing them).
    std::vector<std::size_t> introduced_objects;
    /// Attributes whose attribute concept this is (largest extent sharing them).
    std::vector<std::size_t> introduced_attributes;
};

/// Object and attribute concepts of a context ordered by extent inclusion.
///
/// Concepts are sorted by decreasing extent size, then increasing intent
/// size, then bit pattern, so the most general concept comes first.
class AocPoset {
public:
    AocPoset(FormalContext context, std::vector<Concept> concepts);

    const FormalContext& context() const noexcept { return context_; }
    const std::vector<Concept>& concepts() const noexcept { return concepts_; }
    std::size_t size() const noexcept { return concepts_.size(); }

    /// extent(child) is a subset of extent(parent).
    bool leq(std::size_t child, std::size_t parent) const;

    /// Hasse diagram: (child, parent) pairs with no concept strictly between.
    const std::vector<std::pair<std::size_t, std::size_t>>& covers() const noexcept {
        return covers_;
    }

    std::size_t object_concept(std::size_t object) const { return object_concept_[object]; }
    std::size_t attribute_concept(std::size_t attribute) const {
        return attribute_concept_[attribute];
    }

private:
    FormalContext context_;
    std::vector<Concept> concepts_;
    std::vector<std::pair<std::size_t, std::size_t>> covers_;
    std::vector<std::size_t> object_concept_;
    std::vector<std::size_t> attribute_concept_;
};

/// Generates (o'', o') for every object and (a', a'') for every attribute,
/// merges equal concepts and orders them.
AocPoset build_aoc_poset(const FormalContext& context);

struct DuplicateMatch {
    std::string doc_id;
    double score = 0.0;

    bool operator==(const DuplicateMatch&) const = default;
};

struct DuplicateEntry {
    std::string query_id;
    /// Sorted by score descending, ties by ascending id.
    std::vector<DuplicateMatch> matches;

    bool operator==(const DuplicateEntry&) const = default;
};

/// Queries detected as duplicates, in context object order.
struct DuplicateList {
    std::vector<DuplicateEntry> entries;

    bool empty() const noexcept { return entries.empty(); }
    const DuplicateEntry* find(std::string_view query_id) const;
};

/// Every query lying in the extent of a concept with a nonempty intent is a
/// duplicate of the reports in its own intent. Queries only reachable through
/// intent-empty concepts are unique.
DuplicateList extract_duplicates(const AocPoset& poset, const SimilarityMatrix& csm,
                                 double threshold);

/// Graphviz rendering, one box per concept listing the objects and attributes it introduces.
std::string poset_to_dot(const AocPoset& poset);

}  // namespace dupseek

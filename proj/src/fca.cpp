#include "dupseek/fca.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "dupseek/errors.hpp"

namespace dupseek {
namespace {

std::unordered_map<std::string, std::size_t> index_ids(const std::vector<std::string>& ids,
                                                       const char* what) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!index.emplace(ids[i], i).second) {
            throw ParameterError(std::string("repeated ") + what + " id '" + ids[i] + "'");
        }
    }
    return index;
}

IndexSet ids_to_set(std::span<const std::string> ids, const std::vector<std::string>& universe,
                    const char* what) {
    IndexSet set(universe.size());
    for (const auto& id : ids) {
        auto it = std::find(universe.begin(), universe.end(), id);
        if (it == universe.end()) {
            throw ParameterError(std::string("unknown ") + what + " '" + id + "'");
        }
        set.set(static_cast<std::size_t>(it - universe.begin()));
    }
    return set;
}

std::vector<std::string> set_to_ids(const IndexSet& set, const std::vector<std::string>& universe) {
    std::vector<std::string> out;
    for (auto i = set.find_first(); i != IndexSet::npos; i = set.find_next(i)) {
        out.push_back(universe[i]);
    }
    return out;
}

// Escapes text for a Graphviz record label.
std::string record_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '{' || c == '}' || c == '|' || c == '<' || c == '>' || c == '"' || c == '\\' ||
            c == ' ') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

}  // namespace

FormalContext::FormalContext(std::vector<std::string> objects,
                             std::vector<std::string> attributes,
                             const std::vector<std::vector<bool>>& relation)
    : objects_(std::move(objects)), attributes_(std::move(attributes)) {
    index_ids(objects_, "object");
    index_ids(attributes_, "attribute");
    if (relation.size() != objects_.size()) {
        throw ParameterError("relation has " + std::to_string(relation.size()) +
                             " rows for " + std::to_string(objects_.size()) + " objects");
    }
    rows_.assign(objects_.size(), IndexSet(attributes_.size()));
    columns_.assign(attributes_.size(), IndexSet(objects_.size()));
    for (std::size_t o = 0; o < objects_.size(); ++o) {
        if (relation[o].size() != attributes_.size()) {
            throw ParameterError("relation row " + std::to_string(o) + " has the wrong width");
        }
        for (std::size_t a = 0; a < attributes_.size(); ++a) {
            if (relation[o][a]) {
                rows_[o].set(a);
                columns_[a].set(o);
            }
        }
    }
}

IndexSet FormalContext::derive_objects(const IndexSet& objects) const {
    IndexSet shared(attributes_.size());
    shared.set();
    for (auto o = objects.find_first(); o != IndexSet::npos; o = objects.find_next(o)) {
        shared &= rows_[o];
    }
    return shared;
}

IndexSet FormalContext::derive_attributes(const IndexSet& attributes) const {
    IndexSet holders(objects_.size());
    holders.set();
    for (auto a = attributes.find_first(); a != IndexSet::npos; a = attributes.find_next(a)) {
        holders &= columns_[a];
    }
    return holders;
}

std::vector<std::string> FormalContext::derive_objects(
    std::span<const std::string> object_ids) const {
    return attribute_ids(derive_objects(object_set(object_ids)));
}

std::vector<std::string> FormalContext::derive_attributes(
    std::span<const std::string> attribute_ids) const {
    return object_ids(derive_attributes(attribute_set(attribute_ids)));
}

IndexSet FormalContext::object_set(std::span<const std::string> ids) const {
    return ids_to_set(ids, objects_, "object");
}

IndexSet FormalContext::attribute_set(std::span<const std::string> ids) const {
    return ids_to_set(ids, attributes_, "attribute");
}

std::vector<std::string> FormalContext::object_ids(const IndexSet& set) const {
    return set_to_ids(set, objects_);
}

std::vector<std::string> FormalContext::attribute_ids(const IndexSet& set) const {
    return set_to_ids(set, attributes_);
}

FormalContext binarize(const SimilarityMatrix& csm, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw ParameterError("threshold must lie in [0, 1]");
    }
    std::vector<std::vector<bool>> relation(csm.query_ids.size(),
                                            std::vector<bool>(csm.doc_ids.size(), false));
    for (std::size_t q = 0; q < csm.query_ids.size(); ++q) {
        for (std::size_t d = 0; d < csm.doc_ids.size(); ++d) {
            relation[q][d] =
                csm.scores(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d)) >=
                threshold;
        }
    }
    return FormalContext(csm.query_ids, csm.doc_ids, relation);
}

AocPoset::AocPoset(FormalContext context, std::vector<Concept> concepts)
    : context_(std::move(context)), concepts_(std::move(concepts)) {
    object_concept_.assign(context_.object_count(), 0);
    attribute_concept_.assign(context_.attribute_count(), 0);
    for (std::size_t c = 0; c < concepts_.size(); ++c) {
        for (auto o : concepts_[c].introduced_objects) object_concept_[o] = c;
        for (auto a : concepts_[c].introduced_attributes) attribute_concept_[a] = c;
    }
    for (std::size_t child = 0; child < concepts_.size(); ++child) {
        for (std::size_t parent = 0; parent < concepts_.size(); ++parent) {
            if (child == parent || !leq(child, parent)) continue;
            bool direct = true;
            for (std::size_t mid = 0; mid < concepts_.size() && direct; ++mid) {
                if (mid != child && mid != parent && leq(child, mid) && leq(mid, parent)) {
                    direct = false;
                }
            }
            if (direct) covers_.emplace_back(child, parent);
        }
    }
}

bool AocPoset::leq(std::size_t child, std::size_t parent) const {
    return concepts_[child].extent.is_subset_of(concepts_[parent].extent);
}

AocPoset build_aoc_poset(const FormalContext& context) {
    // Closed concepts are determined by their extent.
    std::map<IndexSet, Concept> by_extent;
    auto concept_for = [&](IndexSet extent, IndexSet intent) -> Concept& {
        auto [it, inserted] = by_extent.try_emplace(extent);
        if (inserted) {
            it->second.extent = std::move(extent);
            it->second.intent = std::move(intent);
        }
        return it->second;
    };

    for (std::size_t o = 0; o < context.object_count(); ++o) {
        const IndexSet& intent = context.row(o);
        concept_for(context.derive_attributes(intent), intent).introduced_objects.push_back(o);
    }
    for (std::size_t a = 0; a < context.attribute_count(); ++a) {
        const IndexSet& extent = context.column(a);
        concept_for(extent, context.derive_objects(extent)).introduced_attributes.push_back(a);
    }

    std::vector<Concept> concepts;
    concepts.reserve(by_extent.size());
    for (auto& [extent, c] : by_extent) concepts.push_back(std::move(c));
    std::sort(concepts.begin(), concepts.end(), [](const Concept& x, const Concept& y) {
        const auto xe = x.extent.count(), ye = y.extent.count();
        if (xe != ye) return xe > ye;
        const auto xi = x.intent.count(), yi = y.intent.count();
        if (xi != yi) return xi < yi;
        return x.extent < y.extent;
    });
    return AocPoset(context, std::move(concepts));
}

const DuplicateEntry* DuplicateList::find(std::string_view query_id) const {
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const DuplicateEntry& e) { return e.query_id == query_id; });
    return it == entries.end() ? nullptr : &*it;
}

DuplicateList extract_duplicates(const AocPoset& poset, const SimilarityMatrix& csm,
                                 double threshold) {
    const FormalContext& ctx = poset.context();
    if (ctx.objects() != csm.query_ids || ctx.attributes() != csm.doc_ids) {
        throw ParameterError("poset context does not match the similarity matrix");
    }

    IndexSet flagged(ctx.object_count());
    for (const auto& c : poset.concepts()) {
        if (c.extent.any() && c.intent.any()) flagged |= c.extent;
    }

    DuplicateList list;
    for (auto o = flagged.find_first(); o != IndexSet::npos; o = flagged.find_next(o)) {
        DuplicateEntry entry{ctx.objects()[o], {}};
        const IndexSet& related = poset.concepts()[poset.object_concept(o)].intent;
        for (auto a = related.find_first(); a != IndexSet::npos; a = related.find_next(a)) {
            const double score =
                csm.scores(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(a));
            if (score < threshold) {
                throw ParameterError("poset was not built from this matrix at this threshold");
            }
            entry.matches.push_back({ctx.attributes()[a], score});
        }
        std::sort(entry.matches.begin(), entry.matches.end(),
                  [](const DuplicateMatch& x, const DuplicateMatch& y) {
                      if (x.score != y.score) return x.score > y.score;
                      return x.doc_id < y.doc_id;
                  });
        list.entries.push_back(std::move(entry));
    }
    return list;
}

std::string poset_to_dot(const AocPoset& poset) {
    const FormalContext& ctx = poset.context();
    auto join = [](const std::vector<std::string>& ids) {
        std::string out;
        for (const auto& id : ids) {
            if (!out.empty()) out += "\\n";
            out += record_escape(id);
        }
        return out;
    };

    std::ostringstream dot;
    dot << "digraph aoc_poset {\n"
        << "  rankdir=BT;\n"
        << "  node [shape=record, fontname=\"Helvetica\"];\n";
    for (std::size_t c = 0; c < poset.size(); ++c) {
        const Concept& concept_ = poset.concepts()[c];
        std::vector<std::string> attrs, objs;
        for (auto a : concept_.introduced_attributes) attrs.push_back(ctx.attributes()[a]);
        for (auto o : concept_.introduced_objects) objs.push_back(ctx.objects()[o]);
        dot << "  c" << c << " [label=\"{Concept_" << c << "|" << join(attrs) << "|"
            << join(objs) << "}\"";
        if (concept_.extent.any() && concept_.intent.any()) {
            dot << ", style=filled, fillcolor=\"pink\"";
        }
        dot << "];\n";
    }
    for (const auto& [child, parent] : poset.covers()) {
        dot << "  c" << child << " -> c" << parent << " [arrowhead=none];\n";
    }
    dot << "}\n";
    return dot.str();
}

}  // namespace dupseek

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dupseek {

/// One tracker issue. Only the unstructured text is kept.
struct BugReport {
    std::string id;
    std::string summary;
    std::string description;

    bool operator==(const BugReport&) const = default;
};

/// Throws RecordError (index = `index`) when the id is empty or the summary is blank.
void validate_report(const BugReport& report, std::size_t index = 0);

/// Master report set. Insertion order is preserved and ids are unique.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<BugReport> reports);

    /// Appends a report; throws DuplicateIdError on an id collision.
    void add(BugReport report);

    const std::vector<BugReport>& reports() const noexcept { return reports_; }
    std::size_t size() const noexcept { return reports_.size(); }
    bool empty() const noexcept { return reports_.empty(); }

    const BugReport* find(std::string_view id) const noexcept;
    bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }

    /// Copy of this corpus with `id` removed (unchanged if absent).
    Corpus without(std::string_view id) const;

    auto begin() const noexcept { return reports_.begin(); }
    auto end() const noexcept { return reports_.end(); }

    bool operator==(const Corpus&) const = default;

private:
    std::vector<BugReport> reports_;
};

}  // namespace dupseek

#include "dupseek/bug_report.hpp"

#include <algorithm>

#include "dupseek/errors.hpp"
#include "text_util.hpp"

namespace dupseek {

void validate_report(const BugReport& report, std::size_t index) {
    if (report.id.empty()) {
        throw RecordError("missing bug id", index);
    }
    if (detail::trim(report.summary).empty()) {
        throw RecordError("empty summary for bug " + report.id, index);
    }
}

Corpus::Corpus(std::vector<BugReport> reports) {
    reports_.reserve(reports.size());
    for (auto& r : reports) {
        add(std::move(r));
    }
}

void Corpus::add(BugReport report) {
    validate_report(report, reports_.size());
    if (contains(report.id)) {
        throw DuplicateIdError(report.id);
    }
    reports_.push_back(std::move(report));
}

const BugReport* Corpus::find(std::string_view id) const noexcept {
    auto it = std::find_if(reports_.begin(), reports_.end(),
                           [&](const BugReport& r) { return r.id == id; });
    return it == reports_.end() ? nullptr : &*it;
}

Corpus Corpus::without(std::string_view id) const {
    Corpus out;
    out.reports_.reserve(reports_.size());
    for (const auto& r : reports_) {
        if (r.id != id) out.reports_.push_back(r);
    }
    return out;
}

}  // namespace dupseek

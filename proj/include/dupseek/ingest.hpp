#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "dupseek/bug_report.hpp"

namespace dupseek {

/// First line of every corpus store file.
inline constexpr std::string_view kCorpusHeader = "dupseek-corpus v1";

/// Parses a Bugzilla XML export.
///
/// Every `bug` element that is not nested in another `bug` yields one report,
/// in document order. Field mapping (direct children of `bug`):
///   id          <- `bug_id` (or `id`)
///   summary     <- `short_desc` (or `summary`)
///   description <- first `long_desc/thetext` (or `description`); later comments are ignored
/// Ids and summaries are whitespace-trimmed; descriptions keep inner whitespace.
/// Only UTF-8 documents are accepted.
///
/// Throws ParseError for malformed XML or a non-UTF-8 encoding declaration,
/// RecordError for a bug without id or summary, DuplicateIdError for repeated ids.
std::vector<BugReport> parse_bugzilla_xml(std::string_view xml);

/// Reads a file and forwards to parse_bugzilla_xml.
std::vector<BugReport> parse_bugzilla_file(const std::filesystem::path& path);

/// Writes the store atomically (temp file + rename).
///
/// Layout: the header line `dupseek-corpus v1`, then one JSON object per
/// line, `{"id":...,"summary":...,"description":...}`, in corpus order.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Throws MissingFileError, FormatError or DuplicateIdError.
Corpus load_corpus(const std::filesystem::path& path);

}  // namespace dupseek

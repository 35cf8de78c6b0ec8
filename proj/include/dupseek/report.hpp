#pragma once

#include <string>
#include <string_view>

#include "dupseek/eval.hpp"
#include "dupseek/pipeline.hpp"

namespace dupseek {

inline constexpr std::string_view kReportFormat = "dupseek-report v1";

/// Machine-readable report: a JSON object
///
///   format       "dupseek-report v1"
///   query_id     string
///   verdict      "duplicate" | "unique"
///   threshold    number
///   matches      [{"id", "score"}], score descending
///   duplicates   [{"id", "score"}], empty when unique
///   diagnostics  {"dropped_terms", "requested_topics", "effective_topics",
///                 "degenerate_query", "warnings"}
///
/// Output is deterministic for equal reports.
std::string report_to_machine(const RetrievalReport& report);

/// Inverse of report_to_machine. Throws FormatError (path shown as `source`).
RetrievalReport report_from_machine(std::string_view text, std::string_view source = "<report>");

std::string report_to_text(const RetrievalReport& report, std::size_t max_rows = 10);

/// Star graph from the query to every ranked report; edges carry the score
/// with five decimals and duplicate edges are drawn bold red.
std::string similarity_to_dot(const RetrievalReport& report);

/// Rebuilds the one-row similarity matrix stored in a report.
SimilarityMatrix report_similarity_matrix(const RetrievalReport& report);

/// AOC-poset of the report's query at its threshold, rendered as DOT.
std::string report_poset_dot(const RetrievalReport& report);

std::string metrics_to_machine(const ExperimentResult& result, const PipelineConfig& config);
std::string metrics_to_text(const ExperimentResult& result, std::string_view dataset);

}  // namespace dupseek

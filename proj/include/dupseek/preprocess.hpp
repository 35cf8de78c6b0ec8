#pragma once

#include <filesystem>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dupseek/bug_report.hpp"

namespace dupseek {

/// A report reduced to lowercase stems in original text order.
struct ProcessedDocument {
    std::string id;
    std::vector<std::string> tokens;

    bool operator==(const ProcessedDocument&) const = default;
};

/// Set of lowercase function words dropped before indexing.
class StopWordList {
public:
    StopWordList() = default;

    /// Throws ParameterError if any entry is empty or not lowercase.
    explicit StopWordList(std::vector<std::string> words);
    StopWordList(std::initializer_list<std::string_view> words);

    /// Built-in English list (articles, pronouns, prepositions, conjunctions,
    /// auxiliaries and the contraction fragments tokenization leaves behind).
    static const StopWordList& english();

    /// One word per line; blank lines and `#` comments are skipped.
    /// Entries are lowercased. Throws MissingFileError / IoError.
    static StopWordList load(const std::filesystem::path& path);

    bool contains(std::string_view word) const { return words_.find(word) != words_.end(); }
    std::size_t size() const noexcept { return words_.size(); }
    const std::set<std::string, std::less<>>& words() const noexcept { return words_; }

private:
    std::set<std::string, std::less<>> words_;
};

/// Summary, one space, description. The space is omitted when the description is empty.
std::string extract_text(const BugReport& report);

/// Splits on every non-letter and at lower-to-upper case transitions,
/// then lowercases. Only ASCII letters survive; runs of capitals stay whole.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> remove_stop_words(std::vector<std::string> tokens,
                                           const StopWordList& stops);

/// Inflectional Porter2 (English Snowball) stemmer: steps 0 through 1c.
/// "drawing" -> "draw", "functions" -> "function", "using" -> "use",
/// "images" -> "image". Derivational suffixes are left alone.
std::string stem(std::string_view token);

/// extract_text -> tokenize -> remove_stop_words -> stem.
/// Stems that land on a stop word are dropped as well.
ProcessedDocument preprocess_report(const BugReport& report, const StopWordList& stops);

}  // namespace dupseek

#include "dupseek/preprocess.hpp"

#include <algorithm>
#include <sstream>

#include "dupseek/errors.hpp"
#include "text_util.hpp"

namespace dupseek {
namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return is_lower(c) || is_upper(c); }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

void check_entry(std::string_view w) {
    if (w.empty()) {
        throw ParameterError("stop word list contains an empty entry");
    }
    if (std::any_of(w.begin(), w.end(), is_upper)) {
        throw ParameterError("stop word '" + std::string(w) + "' is not lowercase");
    }
}

}  // namespace

StopWordList::StopWordList(std::vector<std::string> words) {
    for (auto& w : words) {
        check_entry(w);
        words_.insert(std::move(w));
    }
}

StopWordList::StopWordList(std::initializer_list<std::string_view> words) {
    for (auto w : words) {
        check_entry(w);
        words_.emplace(w);
    }
}

const StopWordList& StopWordList::english() {
    static const StopWordList list{
        // pronouns and determiners
        "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
        "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
        "herself", "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
        "what", "which", "who", "whom", "this", "that", "these", "those", "a", "an", "the",
        "all", "any", "both", "each", "few", "more", "most", "other", "some", "such", "own",
        "same",
        // auxiliaries
        "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
        "having", "do", "does", "did", "doing", "can", "will", "should",
        // conjunctions and prepositions
        "and", "but", "if", "or", "because", "as", "until", "while", "of", "at", "by", "for",
        "with", "about", "against", "between", "into", "through", "during", "before",
        "after", "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
        "over", "under", "again", "further", "then", "once", "here", "there", "when",
        "where", "why", "how", "nor", "than",
        // adverbs and negation
        "no", "not", "only", "so", "too", "very", "just", "now", "etc",
        // contraction fragments left by splitting on apostrophes
        "s", "t", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn", "didn",
        "doesn", "don", "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn",
        "shan", "shouldn", "wasn", "weren", "won", "wouldn"};
    return list;
}

StopWordList StopWordList::load(const std::filesystem::path& path) {
    std::istringstream in(detail::read_file(path));
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        auto word = detail::trim(line);
        if (word.empty()) continue;
        std::string lowered(word);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(), to_lower);
        words.push_back(std::move(lowered));
    }
    return StopWordList(std::move(words));
}

std::string extract_text(const BugReport& report) {
    if (report.description.empty()) return report.summary;
    std::string text;
    text.reserve(report.summary.size() + 1 + report.description.size());
    text.append(report.summary).push_back(' ');
    text.append(report.description);
    return text;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
    };
    char prev = '\0';
    for (char c : text) {
        if (!is_alpha(c)) {
            flush();
        } else {
            if (is_upper(c) && is_lower(prev)) flush();
            current.push_back(to_lower(c));
        }
        prev = c;
    }
    flush();
    return tokens;
}

std::vector<std::string> remove_stop_words(std::vector<std::string> tokens,
                                           const StopWordList& stops) {
    std::erase_if(tokens, [&](const std::string& t) { return stops.contains(t); });
    return tokens;
}

ProcessedDocument preprocess_report(const BugReport& report, const StopWordList& stops) {
    auto tokens = remove_stop_words(tokenize(extract_text(report)), stops);
    for (auto& t : tokens) t = stem(t);
    return {report.id, remove_stop_words(std::move(tokens), stops)};
}

}  // namespace dupseek

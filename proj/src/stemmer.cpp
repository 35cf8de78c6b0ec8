// Inflectional part of the Porter2 English stemmer (Snowball "english"):
// exceptional forms, step 1a, step 1b and step 1c. Input is a lowercase
// ASCII word without apostrophes, which is all tokenize() produces.

#include <array>
#include <string>
#include <string_view>

#include "dupseek/preprocess.hpp"

namespace dupseek {
namespace {

// 'Y' marks a consonantal y during stemming.
bool is_vowel(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

// Start of the region after the first non-vowel following a vowel.
std::size_t region_after(std::string_view w, std::size_t from) {
    for (std::size_t i = from + 1; i < w.size(); ++i) {
        if (!is_vowel(w[i]) && is_vowel(w[i - 1])) return i + 1;
    }
    return w.size();
}

std::size_t r1_start(std::string_view w) {
    for (std::string_view prefix : {"gener", "commun", "arsen"}) {
        if (w.starts_with(prefix)) return prefix.size();
    }
    return region_after(w, 0);
}

bool contains_vowel(std::string_view w) {
    for (char c : w) {
        if (is_vowel(c)) return true;
    }
    return false;
}

bool ends_in_short_syllable(std::string_view w) {
    const std::size_t n = w.size();
    if (n == 2) return is_vowel(w[0]) && !is_vowel(w[1]);
    if (n < 3) return false;
    const char last = w[n - 1];
    return !is_vowel(w[n - 3]) && is_vowel(w[n - 2]) && !is_vowel(last) && last != 'w' &&
           last != 'x' && last != 'Y';
}

bool is_short_word(std::string_view w) {
    return r1_start(w) >= w.size() && ends_in_short_syllable(w);
}

bool ends_in_double(std::string_view w) {
    if (w.size() < 2) return false;
    static constexpr std::string_view doubles = "bdfgmnprt";
    const char c = w.back();
    return w[w.size() - 2] == c && doubles.find(c) != std::string_view::npos;
}

void step_1a(std::string& w) {
    if (ends_with(w, "sses")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ied") || ends_with(w, "ies")) {
        w.resize(w.size() > 4 ? w.size() - 2 : w.size() - 1);
    } else if (ends_with(w, "us") || ends_with(w, "ss")) {
        // unchanged
    } else if (ends_with(w, "s")) {
        // delete if a vowel occurs before the letter preceding the s
        const std::string_view head(w.data(), w.size() >= 2 ? w.size() - 2 : 0);
        if (contains_vowel(head)) w.pop_back();
    }
}

void step_1b(std::string& w) {
    const std::size_t r1 = r1_start(w);
    for (std::string_view suffix : {"eedly", "eed"}) {
        if (ends_with(w, suffix)) {
            if (w.size() - suffix.size() >= r1) {
                w.resize(w.size() - suffix.size());
                w += "ee";
            }
            return;
        }
    }
    for (std::string_view suffix : {"ingly", "edly", "ing", "ed"}) {
        if (!ends_with(w, suffix)) continue;
        const std::string_view stem(w.data(), w.size() - suffix.size());
        if (!contains_vowel(stem)) return;
        w.resize(stem.size());
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w += 'e';
        } else if (ends_in_double(w)) {
            w.pop_back();
        } else if (is_short_word(w)) {
            w += 'e';
        }
        return;
    }
}

void step_1c(std::string& w) {
    if (w.size() > 2 && (w.back() == 'y' || w.back() == 'Y') && !is_vowel(w[w.size() - 2])) {
        w.back() = 'i';
    }
}

struct Exception {
    std::string_view word;
    std::string_view stem;
};

constexpr std::array<Exception, 18> kExceptions{{
    {"skis", "ski"}, {"skies", "sky"}, {"dying", "die"}, {"lying", "lie"},
    {"tying", "tie"}, {"idly", "idl"}, {"gently", "gentl"}, {"ugly", "ugli"},
    {"early", "earli"}, {"only", "onli"}, {"singly", "singl"}, {"sky", "sky"},
    {"news", "news"}, {"howe", "howe"}, {"atlas", "atlas"}, {"cosmos", "cosmos"},
    {"bias", "bias"}, {"andes", "andes"},
}};

// Left untouched after step 1a.
constexpr std::array<std::string_view, 8> kInvariantAfter1a{
    "inning", "outing", "canning", "herring", "earring", "proceed", "exceed", "succeed"};

}  // namespace

std::string stem(std::string_view token) {
    if (token.size() <= 2) return std::string(token);
    for (const auto& e : kExceptions) {
        if (token == e.word) return std::string(e.stem);
    }

    std::string w(token);
    if (w[0] == 'y') w[0] = 'Y';
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] == 'y' && is_vowel(w[i - 1])) w[i] = 'Y';
    }

    step_1a(w);
    bool frozen = false;
    for (auto inv : kInvariantAfter1a) {
        if (w == inv) frozen = true;
    }
    if (!frozen) {
        step_1b(w);
        step_1c(w);
    }

    for (char& c : w) {
        if (c == 'Y') c = 'y';
    }
    return w;
}

}  // namespace dupseek

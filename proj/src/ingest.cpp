#include "dupseek/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <memory>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <expat.h>
#include <json.hpp>

#include "dupseek/errors.hpp"
#include "text_util.hpp"

namespace dupseek {
namespace {

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

enum class Field { none, id, summary, description };

struct BugBuilder {
    std::optional<std::string> id;
    std::optional<std::string> summary;
    std::optional<std::string> description;
    bool seen_long_desc = false;
};

// SAX state shared with the expat callbacks.
class ExportReader {
public:
    explicit ExportReader(XML_Parser parser) : parser_(parser) {}

    std::vector<BugReport> reports;
    std::optional<std::string> encoding_error;
    std::exception_ptr failure;

    void start(std::string_view name) {
        ++depth_;
        if (!in_bug()) {
            if (name == "bug") {
                bug_depth_ = depth_;
                current_ = BugBuilder{};
            }
            return;
        }
        const int rel = depth_ - bug_depth_;
        if (rel == 1) {
            if ((name == "bug_id" || name == "id") && !current_.id) {
                begin_capture(Field::id);
            } else if ((name == "short_desc" || name == "summary") && !current_.summary) {
                begin_capture(Field::summary);
            } else if (name == "description" && !current_.description) {
                begin_capture(Field::description);
            } else if (name == "long_desc") {
                in_first_long_desc_ = !current_.seen_long_desc;
                current_.seen_long_desc = true;
            }
        } else if (rel == 2 && name == "thetext" && in_first_long_desc_ && !current_.description) {
            begin_capture(Field::description);
        }
    }

    void end(std::string_view name) {
        if (in_bug()) {
            const int rel = depth_ - bug_depth_;
            if (capture_ != Field::none && rel == capture_depth_) {
                finish_capture();
            }
            if (rel == 1 && name == "long_desc") {
                in_first_long_desc_ = false;
            }
            if (rel == 0) {
                finish_bug();
                bug_depth_ = 0;
            }
        }
        --depth_;
    }

    void text(std::string_view chunk) {
        if (capture_ != Field::none) buffer_.append(chunk);
    }

    void fail(std::exception_ptr e) {
        if (!failure) failure = std::move(e);
        XML_StopParser(parser_, XML_FALSE);
    }

    void reject_encoding(std::string encoding) {
        encoding_error = std::move(encoding);
        XML_StopParser(parser_, XML_FALSE);
    }

private:
    bool in_bug() const { return bug_depth_ > 0; }

    void begin_capture(Field f) {
        capture_ = f;
        capture_depth_ = depth_ - bug_depth_;
        buffer_.clear();
    }

    void finish_capture() {
        switch (capture_) {
            case Field::id: current_.id = std::string(detail::trim(buffer_)); break;
            case Field::summary: current_.summary = std::string(detail::trim(buffer_)); break;
            case Field::description:
                current_.description = std::string(detail::trim(buffer_));
                break;
            case Field::none: break;
        }
        capture_ = Field::none;
        buffer_.clear();
    }

    void finish_bug() {
        const std::size_t index = bug_index_++;
        if (!current_.id || current_.id->empty()) {
            throw RecordError("missing bug id", index);
        }
        BugReport report{*current_.id, current_.summary.value_or(""),
                         current_.description.value_or("")};
        validate_report(report, index);
        if (!seen_ids_.insert(report.id).second) {
            throw DuplicateIdError(report.id);
        }
        reports.push_back(std::move(report));
    }

    XML_Parser parser_;
    int depth_ = 0;
    int bug_depth_ = 0;
    std::size_t bug_index_ = 0;
    BugBuilder current_;
    bool in_first_long_desc_ = false;
    Field capture_ = Field::none;
    int capture_depth_ = 0;
    std::string buffer_;
    std::unordered_set<std::string> seen_ids_;
};

void XMLCALL on_start(void* user, const XML_Char* name, const XML_Char**) {
    auto* reader = static_cast<ExportReader*>(user);
    try {
        reader->start(name);
    } catch (...) {
        reader->fail(std::current_exception());
    }
}

void XMLCALL on_end(void* user, const XML_Char* name) {
    auto* reader = static_cast<ExportReader*>(user);
    try {
        reader->end(name);
    } catch (...) {
        reader->fail(std::current_exception());
    }
}

void XMLCALL on_text(void* user, const XML_Char* s, int len) {
    auto* reader = static_cast<ExportReader*>(user);
    try {
        reader->text(std::string_view(s, static_cast<std::size_t>(len)));
    } catch (...) {
        reader->fail(std::current_exception());
    }
}

void XMLCALL on_decl(void* user, const XML_Char*, const XML_Char* encoding, int) {
    auto* reader = static_cast<ExportReader*>(user);
    if (encoding != nullptr && !iequals(encoding, "UTF-8")) {
        reader->reject_encoding(encoding);
    }
}

struct ParserDeleter {
    void operator()(XML_ParserStruct* p) const { XML_ParserFree(p); }
};

}  // namespace

std::vector<BugReport> parse_bugzilla_xml(std::string_view xml) {
    std::unique_ptr<XML_ParserStruct, ParserDeleter> parser(XML_ParserCreate("UTF-8"));
    if (!parser) {
        throw Error("cannot allocate XML parser");
    }
    ExportReader reader(parser.get());
    XML_SetUserData(parser.get(), &reader);
    XML_SetElementHandler(parser.get(), on_start, on_end);
    XML_SetCharacterDataHandler(parser.get(), on_text);
    XML_SetXmlDeclHandler(parser.get(), on_decl);

    auto position_error = [&](const std::string& what) {
        return ParseError(what, XML_GetCurrentLineNumber(parser.get()),
                          XML_GetCurrentColumnNumber(parser.get()) + 1,
                          static_cast<std::size_t>(
                              std::max<XML_Index>(0, XML_GetCurrentByteIndex(parser.get()))));
    };

    constexpr std::size_t kChunk = std::size_t{1} << 20;
    std::size_t offset = 0;
    do {
        const std::size_t n = std::min(kChunk, xml.size() - offset);
        const bool last = offset + n == xml.size();
        const auto status =
            XML_Parse(parser.get(), xml.data() + offset, static_cast<int>(n), last);
        if (reader.encoding_error) {
            throw position_error("unsupported encoding '" + *reader.encoding_error +
                                 "', expected UTF-8");
        }
        if (reader.failure) {
            std::rethrow_exception(reader.failure);
        }
        if (status != XML_STATUS_OK) {
            throw position_error(XML_ErrorString(XML_GetErrorCode(parser.get())));
        }
        offset += n;
    } while (offset < xml.size());

    return std::move(reader.reports);
}

std::vector<BugReport> parse_bugzilla_file(const std::filesystem::path& path) {
    return parse_bugzilla_xml(detail::read_file(path));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    std::string out;
    out.append(kCorpusHeader).push_back('\n');
    for (const auto& r : corpus) {
        nlohmann::ordered_json line;
        line["id"] = r.id;
        line["summary"] = r.summary;
        line["description"] = r.description;
        try {
            out.append(line.dump()).push_back('\n');
        } catch (const nlohmann::json::exception& e) {
            throw DataError("report " + r.id + " is not valid UTF-8: " + e.what());
        }
    }
    detail::write_file_atomic(path, out);
}

Corpus load_corpus(const std::filesystem::path& path) {
    const std::string contents = detail::read_file(path);
    std::istringstream in(contents);
    std::string line;
    std::size_t lineno = 0;

    if (!std::getline(in, line) || (++lineno, line != kCorpusHeader)) {
        throw FormatError("expected header '" + std::string(kCorpusHeader) + "'", path, 1);
    }

    Corpus corpus;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            throw FormatError("blank line", path, lineno);
        }
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("invalid JSON record: ") + e.what(), path, lineno);
        }
        auto field = [&](const char* key) -> std::string {
            if (!record.is_object() || !record.contains(key) || !record[key].is_string()) {
                throw FormatError(std::string("missing string field '") + key + "'", path,
                                  lineno);
            }
            return record[key].get<std::string>();
        };
        BugReport r{field("id"), field("summary"), field("description")};
        try {
            corpus.add(std::move(r));
        } catch (const RecordError& e) {
            throw FormatError(e.what(), path, lineno);
        }
    }
    return corpus;
}

}  // namespace dupseek

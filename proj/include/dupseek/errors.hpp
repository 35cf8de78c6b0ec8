#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace dupseek {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller passed an argument outside an operation's domain.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed XML input.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column,
               std::size_t byte_offset)
        : Error(what + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ", byte " + std::to_string(byte_offset) + ")"),
          line_(line), column_(column), byte_offset_(byte_offset) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::size_t byte_offset_;
};

/// A single bug record is unusable (missing id, blank summary).
class RecordError : public Error {
public:
    RecordError(const std::string& what, std::size_t index)
        : Error("bug element " + std::to_string(index) + ": " + what), index_(index) {}

    /// 0-based position of the offending bug element.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Two reports share an id.
class DuplicateIdError : public Error {
public:
    explicit DuplicateIdError(std::string id)
        : Error("duplicate report id '" + id + "'"), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::filesystem::path path)
        : Error(what + ": " + path.string()), path_(std::move(path)) {}

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

class MissingFileError : public IoError {
public:
    explicit MissingFileError(std::filesystem::path path)
        : IoError("no such file", std::move(path)) {}
};

/// A text file does not follow its documented layout.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::filesystem::path path, std::size_t line)
        : Error(path.string() + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)), line_(line) {}

    const std::filesystem::path& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::filesystem::path path_;
    std::size_t line_;
};

/// Inputs are well-formed but cannot be processed (empty vocabulary, too few reports).
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace dupseek

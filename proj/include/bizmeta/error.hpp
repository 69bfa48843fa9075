#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bizmeta {

// Error categories shared by every layer; the HTTP adapter maps them onto
// status codes (not_found=404, validation/bad_request/parse_error=400,
// conflict=409).
enum class ErrorCode { not_found, validation, conflict, parse_error, bad_request };

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class NotFound : public Error {
public:
    explicit NotFound(const std::string& message) : Error(ErrorCode::not_found, message) {}
};

class Conflict : public Error {
public:
    explicit Conflict(const std::string& message) : Error(ErrorCode::conflict, message) {}
};

class BadRequest : public Error {
public:
    explicit BadRequest(const std::string& message) : Error(ErrorCode::bad_request, message) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);
    ValidationError(const std::string& context, std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

// Raised by the NavQL parser. `offset` is a byte offset into the query text.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
    std::string found_;
};

// Malformed NDJSON input. Carries the 1-based line number and offending field.
class ImportError : public Error {
public:
    ImportError(std::size_t line, std::string field, const std::string& reason);

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

}  // namespace bizmeta

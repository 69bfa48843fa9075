#include "bizmeta/error.hpp"

namespace bizmeta {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::not_found: return "not_found";
        case ErrorCode::validation: return "validation";
        case ErrorCode::conflict: return "conflict";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::bad_request: return "bad_request";
    }
    return "bad_request";
}

namespace {

std::string join_violations(const std::string& context, const std::vector<std::string>& violations) {
    std::string out = context;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        out += (i == 0 ? ": " : "; ");
        out += violations[i];
    }
    return out;
}

std::string describe_parse_error(std::size_t offset, const std::vector<std::string>& expected,
                                 const std::string& found) {
    std::string out = "parse error at offset " + std::to_string(offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) out += (i + 1 == expected.size() ? " or " : ", ");
        out += expected[i];
    }
    out += ", found " + found;
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : ValidationError("validation failed", std::move(violations)) {}

ValidationError::ValidationError(const std::string& context, std::vector<std::string> violations)
    : Error(ErrorCode::validation, join_violations(context, violations)),
      violations_(std::move(violations)) {}

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error(ErrorCode::parse_error, describe_parse_error(offset, expected, found)),
      offset_(offset),
      expected_(std::move(expected)),
      found_(found) {}

ImportError::ImportError(std::size_t line, std::string field, const std::string& reason)
    : Error(ErrorCode::bad_request,
            "line " + std::to_string(line) + (field.empty() ? "" : ", field '" + field + "'") + ": " + reason),
      line_(line),
      field_(std::move(field)) {}

}  // namespace bizmeta

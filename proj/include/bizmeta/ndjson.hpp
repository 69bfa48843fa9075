#pragma once

// Line-delimited JSON exchange format. One record per line, discriminated by
// "rec": meta, concept, assoc, dimdef, dimrow, factdef, fact, xlink. Export is
// canonical: records are grouped in that order, then sorted by identifier and
// version number (facts keep insertion order within their table), so equal
// repositories produce identical bytes.

#include <string>
#include <string_view>

#include "bizmeta/linkage.hpp"

namespace bizmeta::ndjson {

inline constexpr std::string_view kFormatName = "bizmeta";
inline constexpr int kFormatVersion = 1;

std::string export_repository(const Repository& repo);

// Parses and applies every record of `text` to `repo`. All-or-nothing: on
// failure `repo` is left untouched and an ImportError names the line and field.
void import_into(Repository& repo, std::string_view text);

Repository import_repository(std::string_view text);

std::string read_file(const std::string& path);
// Writes via a temporary file and rename so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bizmeta::ndjson

#pragma once

// JSON shapes shared by the NDJSON exchange format, the HTTP service and the
// CLI. Every result serialization used by more than one surface lives here so
// that the surfaces stay byte-identical.

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bizmeta/linkage.hpp"
#include "bizmeta/navql.hpp"

namespace bizmeta::codec {

using Json = nlohmann::ordered_json;

// Text -> string, number -> number, date -> {"date": "YYYY-MM-DD"}.
Json to_json(const Scalar& value);
Json to_json(const Cell& value);
Json to_json(const Attributes& attrs);
Json to_json(const ConceptVersion& v);
Json to_json(const AssociationVersion& v);
Json to_json(const CrossLink& l);
Json to_json(const DimensionDef& d);
Json to_json(const DimensionRowVersion& r);
Json to_json(const FactDef& f);
Json to_json(const FactRow& r);
Json to_json(const ResultTable& t);
Json to_json(const DimensionView& v);
Json to_json(const FactRef& f);
Json to_json(const EvaluationRecord& r);
Json to_json(const ActionRecord& r);
Json to_json(const navql::Result& r);

Json date_or_null(const std::optional<Date>& d);

// Concept versions of `ids` as of `t`, ordered by id; ids with no covering version are skipped.
Json concepts_as_of(const MetadataStore& store, const std::set<std::string>& ids, Date t);
Json concepts_during(const MetadataStore& store, const std::set<std::string>& ids, const ValidInterval& window);
Json versions(const std::vector<ConceptVersion>& chain);

// Decoders throw BadRequest naming the offending field.
Scalar scalar_from_json(const Json& j, const std::string& field);
Attributes attributes_from_json(const Json& j, const std::string& field);
Date date_from_json(const Json& j, const std::string& field);
std::optional<Date> optional_date_from_json(const Json& j, const std::string& field);
std::string string_from_json(const Json& j, const std::string& field);
FactQuery fact_query_from_json(const Json& j);

}  // namespace bizmeta::codec

#pragma once

// NavQL: a small textual language for scripting navigation through the
// metadata repository and down into the warehouse.
//
//   query    = start { "." step } [ temporal ] [ "." dataTail ] ;
//   start    = KIND "(" [ pred { "," pred } ] ")" | "#" ID ;
//   pred     = ATTR "=" STRING ;
//   step     = METHOD "(" ")" | "history" "(" ")" ;
//   temporal = "ASOF" DATE | "DURING" "[" DATE "," DATE ")" ;
//   dataTail = "data" "(" agg { "," agg } [ "BY" ATTRREF { "," ATTRREF } ]
//              [ "WHERE" dpred { "AND" dpred } ] [ "FROM" DATE "TO" DATE ] ")" ;
//   agg      = ("sum"|"avg"|"min"|"max"|"count") "(" COLUMN ")" ;
//   dpred    = ATTRREF ("="|"!="|"<"|"<="|">"|">=") literal ;
//   literal  = STRING | NUMBER | DATE ;
//
// KIND is a concept kind name or "Entity" (either entity kind). METHOD is a
// traversal method from the navigation dispatch table. history() must be the
// last step and cannot be followed by a data tail.

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bizmeta/linkage.hpp"

namespace bizmeta::navql {

struct AttrEquals {
    std::string attr;
    std::string value;

    bool operator==(const AttrEquals&) const = default;
};

struct KindSelector {
    std::string kind;
    std::vector<AttrEquals> preds;

    bool operator==(const KindSelector&) const = default;
};

struct IdRef {
    std::string id;

    bool operator==(const IdRef&) const = default;
};

using Start = std::variant<KindSelector, IdRef>;

struct MethodStep {
    std::string name;

    bool operator==(const MethodStep&) const = default;
};

struct HistoryStep {
    bool operator==(const HistoryStep&) const = default;
};

using Step = std::variant<MethodStep, HistoryStep>;

struct DefaultTime {
    bool operator==(const DefaultTime&) const = default;
};

struct AsOf {
    Date date;

    bool operator==(const AsOf&) const = default;
};

struct During {
    Date from;
    Date to;

    bool operator==(const During&) const = default;
};

using Temporal = std::variant<DefaultTime, AsOf, During>;

struct DateRange {
    Date from;
    Date to;

    bool operator==(const DateRange&) const = default;
};

struct DataSpec {
    std::vector<Aggregate> aggs;
    std::vector<AttrRef> group_by;
    std::vector<Predicate> where;
    std::optional<DateRange> range;

    bool operator==(const DataSpec&) const = default;
};

struct Query {
    Start start;
    std::vector<Step> chain;
    Temporal temporal;
    std::optional<DataSpec> data;

    bool operator==(const Query&) const = default;
};

// Throws ParseError carrying the byte offset and the set of expected tokens.
Query parse(std::string_view text);

// Canonical text form; parse(print(q)) == q.
std::string print(const Query& query);

struct ConceptSetResult {
    std::vector<ConceptVersion> concepts;  // ordered by logical_id
};

struct HistoryResult {
    std::string id;
    std::vector<ConceptVersion> versions;
};

struct DataResult {
    std::string fact;
    std::vector<std::string> measures;
    ResultTable table;
};

using Result = std::variant<ConceptSetResult, HistoryResult, DataResult>;

// Evaluates against a read-only repository. `now` is the time used when the
// query carries no temporal qualifier.
Result evaluate(const Query& query, const Repository& repo, Date now);

// Kinds selected by a start selector name ("Entity" selects both entity kinds).
std::optional<std::set<ConceptKind>> selector_kinds(std::string_view kind);

}  // namespace bizmeta::navql

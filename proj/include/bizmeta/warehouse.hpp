#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "bizmeta/date.hpp"
#include "bizmeta/model.hpp"

namespace bizmeta {

struct DimensionDef {
    std::string name;
    std::string key_attr;
    std::vector<std::string> attrs;

    bool operator==(const DimensionDef&) const = default;
};

// One SCD type-2 version of a dimension member.
struct DimensionRowVersion {
    std::string dimension;
    std::string key;
    int version_no = 1;
    Attributes attrs;
    ValidInterval interval;

    bool operator==(const DimensionRowVersion&) const = default;
};

struct FactDef {
    std::string name;
    std::vector<std::string> dims;
    std::vector<std::string> measures;

    bool operator==(const FactDef&) const = default;
};

// A point-in-time measure record. `t` is its coordinate on the time dimension.
struct FactRow {
    std::string fact;
    std::map<std::string, std::string> dim_keys;
    Date t;
    std::map<std::string, double> values;

    bool operator==(const FactRow&) const = default;
};

enum class CompareOp { eq, ne, lt, le, gt, ge };
enum class AggFn { sum, avg, min, max, count };

std::string_view to_string(CompareOp op);
std::optional<CompareOp> parse_compare_op(std::string_view text);
std::string_view to_string(AggFn fn);
std::optional<AggFn> parse_agg_fn(std::string_view text);

// Name of the implicit time dimension. Its attributes are derived from a fact's
// own `t`: date (Date), year (number), month (number), quarter (text "YYYY-Qn").
inline constexpr std::string_view kTimeDimension = "Time";

struct AttrRef {
    std::string dimension;
    std::string attr;

    bool operator==(const AttrRef&) const = default;
};

struct Predicate {
    AttrRef ref;
    CompareOp op = CompareOp::eq;
    Scalar value;

    bool operator==(const Predicate&) const = default;
};

struct Aggregate {
    AggFn fn = AggFn::sum;
    std::string column;

    bool operator==(const Aggregate&) const = default;
};

struct FactQuery {
    std::string fact;
    std::vector<Predicate> where;
    std::vector<AttrRef> group_by;
    std::vector<Aggregate> agg;
    std::optional<ValidInterval> time_range;  // unset: all time
    std::optional<Date> as_of;                // unset: resolve dimensions as of each fact's t
};

// Null cells stand for dimension attributes with no covering row version.
using Cell = std::optional<Scalar>;

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    bool operator==(const ResultTable&) const = default;
};

// Predicate semantics shared with test oracles: a missing value satisfies no
// comparison; values of different scalar types are unequal and unordered.
bool predicate_holds(const Cell& lhs, CompareOp op, const Scalar& rhs);

// Ordering of group keys: null first, then compare_scalars, component-wise.
bool cell_less(const std::vector<Cell>& a, const std::vector<Cell>& b);

Cell time_attribute(Date t, std::string_view attr);

// Embedded star-schema warehouse with temporal dimensions and point-stamped facts.
class Warehouse {
public:
    using RowChain = std::vector<DimensionRowVersion>;

    void define_dimension(const DimensionDef& def);
    void define_fact(const FactDef& def);

    void upsert_dim_row(const std::string& dimension, const std::string& key, Attributes attrs, Date effective_from);
    // All rows are validated before any is appended.
    std::size_t insert_facts(const std::vector<FactRow>& rows);

    ResultTable query_facts(const FactQuery& query) const;

    bool has_dimension(const std::string& name) const { return dims_.count(name) != 0; }
    bool has_fact(const std::string& name) const { return facts_.count(name) != 0; }
    bool has_key(const std::string& dimension, const std::string& key) const;
    const DimensionDef& dimension_def(const std::string& name) const;
    const FactDef& fact_def(const std::string& name) const;

    const RowChain& row_history(const std::string& dimension, const std::string& key) const;
    std::optional<DimensionRowVersion> row_as_of(const std::string& dimension, const std::string& key, Date t) const;
    std::vector<DimensionRowVersion> rows_as_of(const std::string& dimension, Date t) const;

    std::vector<std::string> dimension_names() const;
    std::vector<std::string> fact_names() const;
    const std::map<std::string, RowChain>& rows_of(const std::string& dimension) const;
    const std::vector<FactRow>& facts_of(const std::string& fact) const;

    // Import path: complete row chain, validated like upserts.
    void insert_row_chain(RowChain chain);

    bool operator==(const Warehouse& other) const;

private:
    struct Dimension {
        DimensionDef def;
        std::map<std::string, RowChain> rows;
    };
    struct FactTable {
        FactDef def;
        std::vector<FactRow> rows;
        std::set<std::pair<std::map<std::string, std::string>, Date>> coordinates;
    };

    Dimension& dimension(const std::string& name);
    const Dimension& dimension(const std::string& name) const;
    void check_row_attrs(const DimensionDef& def, const Attributes& attrs) const;

    std::map<std::string, Dimension> dims_;
    std::map<std::string, FactTable> facts_;
};

}  // namespace bizmeta

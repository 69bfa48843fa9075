#include "bizmeta/warehouse.hpp"

#include <algorithm>
#include <limits>

#include "bizmeta/error.hpp"
#include "bizmeta/store.hpp"

namespace bizmeta {

namespace {

constexpr std::array<std::string_view, 6> kOpNames = {"=", "!=", "<", "<=", ">", ">="};
constexpr std::array<std::string_view, 5> kAggNames = {"sum", "avg", "min", "max", "count"};

bool has_duplicates(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    return std::adjacent_find(names.begin(), names.end()) != names.end();
}

std::string coordinate_text(const FactRow& row) {
    std::string out = row.fact + "(";
    bool first = true;
    for (const auto& [dim, key] : row.dim_keys) {
        if (!first) out += ", ";
        first = false;
        out += dim + "=" + key;
    }
    return out + ", t=" + row.t.to_string() + ")";
}

struct Accumulator {
    double sum = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;

    void add(double v) {
        sum += v;
        min = std::min(min, v);
        max = std::max(max, v);
        ++count;
    }

    double result(AggFn fn) const {
        switch (fn) {
            case AggFn::sum: return sum;
            case AggFn::avg: return sum / static_cast<double>(count);
            case AggFn::min: return min;
            case AggFn::max: return max;
            case AggFn::count: return static_cast<double>(count);
        }
        return 0.0;
    }
};

}  // namespace

std::string_view to_string(CompareOp op) { return kOpNames[static_cast<std::size_t>(op)]; }

std::optional<CompareOp> parse_compare_op(std::string_view text) {
    if (text == "≠" || text == "<>") return CompareOp::ne;
    if (text == "≤") return CompareOp::le;
    if (text == "≥") return CompareOp::ge;
    for (std::size_t i = 0; i < kOpNames.size(); ++i) {
        if (kOpNames[i] == text) return static_cast<CompareOp>(i);
    }
    return std::nullopt;
}

std::string_view to_string(AggFn fn) { return kAggNames[static_cast<std::size_t>(fn)]; }

std::optional<AggFn> parse_agg_fn(std::string_view text) {
    for (std::size_t i = 0; i < kAggNames.size(); ++i) {
        if (kAggNames[i] == text) return static_cast<AggFn>(i);
    }
    return std::nullopt;
}

bool predicate_holds(const Cell& lhs, CompareOp op, const Scalar& rhs) {
    if (!lhs) return false;
    if (lhs->index() != rhs.index()) return op == CompareOp::ne;
    const int c = compare_scalars(*lhs, rhs);
    switch (op) {
        case CompareOp::eq: return c == 0;
        case CompareOp::ne: return c != 0;
        case CompareOp::lt: return c < 0;
        case CompareOp::le: return c <= 0;
        case CompareOp::gt: return c > 0;
        case CompareOp::ge: return c >= 0;
    }
    return false;
}

bool cell_less(const std::vector<Cell>& a, const std::vector<Cell>& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!a[i] && !b[i]) continue;
        if (!a[i]) return true;
        if (!b[i]) return false;
        const int c = compare_scalars(*a[i], *b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

Cell time_attribute(Date t, std::string_view attr) {
    if (attr == "date") return Scalar{t};
    if (attr == "year") return Scalar{static_cast<double>(t.year())};
    if (attr == "month") return Scalar{static_cast<double>(t.month())};
    if (attr == "quarter") {
        return Scalar{std::to_string(t.year()) + "-Q" + std::to_string((t.month() - 1) / 3 + 1)};
    }
    return std::nullopt;
}

Warehouse::Dimension& Warehouse::dimension(const std::string& name) {
    auto it = dims_.find(name);
    if (it == dims_.end()) throw NotFound("unknown dimension '" + name + "'");
    return it->second;
}

const Warehouse::Dimension& Warehouse::dimension(const std::string& name) const {
    auto it = dims_.find(name);
    if (it == dims_.end()) throw NotFound("unknown dimension '" + name + "'");
    return it->second;
}

void Warehouse::define_dimension(const DimensionDef& def) {
    std::vector<std::string> violations;
    if (!is_valid_identifier(def.name)) violations.push_back("dimension name must be an identifier");
    if (def.name == kTimeDimension) violations.push_back("'Time' is reserved for the time dimension");
    if (std::find(def.attrs.begin(), def.attrs.end(), def.key_attr) == def.attrs.end()) {
        violations.push_back("key_attr must be one of attrs");
    }
    if (has_duplicates(def.attrs)) violations.push_back("attribute names must be unique");
    for (const auto& a : def.attrs) {
        if (!is_valid_identifier(a)) violations.push_back("attribute '" + a + "' must be an identifier");
    }
    if (!violations.empty()) throw ValidationError("invalid dimension '" + def.name + "'", std::move(violations));
    if (dims_.count(def.name)) throw Conflict("duplicate dimension '" + def.name + "'");
    dims_.emplace(def.name, Dimension{def, {}});
}

void Warehouse::define_fact(const FactDef& def) {
    std::vector<std::string> violations;
    if (!is_valid_identifier(def.name)) violations.push_back("fact name must be an identifier");
    if (def.measures.empty()) violations.push_back("fact needs at least one measure column");
    if (has_duplicates(def.dims)) violations.push_back("dimension list must be unique");
    if (has_duplicates(def.measures)) violations.push_back("measure names must be unique");
    for (const auto& d : def.dims) {
        if (!dims_.count(d)) violations.push_back("unknown dimension '" + d + "'");
    }
    for (const auto& m : def.measures) {
        if (!is_valid_identifier(m)) violations.push_back("measure '" + m + "' must be an identifier");
    }
    if (!violations.empty()) throw ValidationError("invalid fact '" + def.name + "'", std::move(violations));
    if (facts_.count(def.name)) throw Conflict("duplicate fact '" + def.name + "'");
    facts_.emplace(def.name, FactTable{def, {}, {}});
}

void Warehouse::check_row_attrs(const DimensionDef& def, const Attributes& attrs) const {
    std::vector<std::string> violations;
    for (const auto& [name, value] : attrs) {
        if (std::find(def.attrs.begin(), def.attrs.end(), name) == def.attrs.end()) {
            violations.push_back("unknown attribute '" + name + "' for dimension " + def.name);
        }
    }
    if (!violations.empty()) throw ValidationError("invalid dimension row", std::move(violations));
}

void Warehouse::upsert_dim_row(const std::string& dim_name, const std::string& key, Attributes attrs,
                               Date effective_from) {
    Dimension& dim = dimension(dim_name);
    if (key.empty()) throw ValidationError("invalid dimension row", {"key must not be empty"});
    check_row_attrs(dim.def, attrs);
    auto key_attr = attrs.find(dim.def.key_attr);
    if (key_attr == attrs.end()) {
        attrs.emplace(dim.def.key_attr, Scalar{key});
    } else if (scalar_to_text(key_attr->second) != key) {
        throw ValidationError("invalid dimension row", {"key attribute '" + dim.def.key_attr + "' must equal key"});
    }

    RowChain& chain = dim.rows[key];
    if (!chain.empty() && !(chain.back().interval.from < effective_from)) {
        throw Conflict("retroactive upsert rejected for " + dim_name + "/" + key + ": " +
                       effective_from.to_string() + " is not after " + chain.back().interval.from.to_string());
    }
    if (!chain.empty() && chain.back().interval.to && effective_from < *chain.back().interval.to) {
        throw Conflict("upsert for " + dim_name + "/" + key + " overlaps a closed row version");
    }
    DimensionRowVersion v;
    v.dimension = dim_name;
    v.key = key;
    v.version_no = chain.empty() ? 1 : chain.back().version_no + 1;
    v.attrs = std::move(attrs);
    v.interval = ValidInterval::open_from(effective_from);
    if (!chain.empty() && chain.back().interval.is_open()) chain.back().interval.to = effective_from;
    chain.push_back(std::move(v));
}

void Warehouse::insert_row_chain(RowChain chain) {
    if (chain.empty()) throw BadRequest("empty dimension row chain");
    const std::string dim_name = chain.front().dimension;
    const std::string key = chain.front().key;
    Dimension& dim = dimension(dim_name);
    if (dim.rows.count(key)) throw Conflict("duplicate dimension row " + dim_name + "/" + key);
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto& v = chain[i];
        if (v.dimension != dim_name || v.key != key) violations.push_back("mixed row identities in chain");
        if (v.version_no != static_cast<int>(i + 1)) violations.push_back("version_no must be consecutive from 1");
        auto ka = v.attrs.find(dim.def.key_attr);
        if (ka == v.attrs.end() || scalar_to_text(ka->second) != key) {
            violations.push_back("key attribute '" + dim.def.key_attr + "' must equal key");
        }
    }
    for (auto& msg :
         validate_chain(chain, [](const DimensionRowVersion& v) -> const ValidInterval& { return v.interval; })) {
        violations.push_back(std::move(msg));
    }
    if (!violations.empty()) throw ValidationError("invalid dimension row chain", std::move(violations));
    for (const auto& v : chain) check_row_attrs(dim.def, v.attrs);
    dim.rows.emplace(key, std::move(chain));
}

std::size_t Warehouse::insert_facts(const std::vector<FactRow>& rows) {
    std::set<std::pair<std::string, std::pair<std::map<std::string, std::string>, Date>>> batch;
    for (const FactRow& row : rows) {
        auto it = facts_.find(row.fact);
        if (it == facts_.end()) throw NotFound("unknown fact '" + row.fact + "'");
        const FactDef& def = it->second.def;
        std::vector<std::string> violations;
        if (row.dim_keys.size() != def.dims.size()) violations.push_back("dim_keys must cover exactly the fact's dimensions");
        for (const auto& d : def.dims) {
            auto k = row.dim_keys.find(d);
            if (k == row.dim_keys.end()) {
                violations.push_back("missing key for dimension '" + d + "'");
            } else if (!has_key(d, k->second)) {
                violations.push_back("unknown key '" + k->second + "' in dimension '" + d + "'");
            }
        }
        if (row.values.size() != def.measures.size()) violations.push_back("values must cover exactly the fact's measures");
        for (const auto& m : def.measures) {
            if (!row.values.count(m)) violations.push_back("missing value for measure '" + m + "'");
        }
        if (!violations.empty()) throw ValidationError("invalid fact row " + coordinate_text(row), std::move(violations));
        auto coord = std::make_pair(row.dim_keys, row.t);
        if (it->second.coordinates.count(coord) || !batch.emplace(row.fact, coord).second) {
            throw Conflict("duplicate fact coordinate " + coordinate_text(row));
        }
    }
    for (const FactRow& row : rows) {
        FactTable& table = facts_.at(row.fact);
        table.coordinates.emplace(row.dim_keys, row.t);
        table.rows.push_back(row);
    }
    return rows.size();
}

bool Warehouse::has_key(const std::string& dim_name, const std::string& key) const {
    auto it = dims_.find(dim_name);
    return it != dims_.end() && it->second.rows.count(key) != 0;
}

const DimensionDef& Warehouse::dimension_def(const std::string& name) const { return dimension(name).def; }

const FactDef& Warehouse::fact_def(const std::string& name) const {
    auto it = facts_.find(name);
    if (it == facts_.end()) throw NotFound("unknown fact '" + name + "'");
    return it->second.def;
}

const Warehouse::RowChain& Warehouse::row_history(const std::string& dim_name, const std::string& key) const {
    const Dimension& dim = dimension(dim_name);
    auto it = dim.rows.find(key);
    if (it == dim.rows.end()) throw NotFound("unknown row '" + key + "' in dimension '" + dim_name + "'");
    return it->second;
}

std::optional<DimensionRowVersion> Warehouse::row_as_of(const std::string& dim_name, const std::string& key,
                                                        Date t) const {
    const Dimension& dim = dimension(dim_name);
    auto it = dim.rows.find(key);
    if (it == dim.rows.end()) return std::nullopt;
    const RowChain& chain = it->second;
    auto pos = std::upper_bound(chain.begin(), chain.end(), t,
                                [](Date d, const DimensionRowVersion& v) { return d < v.interval.from; });
    if (pos == chain.begin()) return std::nullopt;
    --pos;
    if (!pos->interval.covers(t)) return std::nullopt;
    return *pos;
}

std::vector<DimensionRowVersion> Warehouse::rows_as_of(const std::string& dim_name, Date t) const {
    std::vector<DimensionRowVersion> out;
    for (const auto& [key, chain] : dimension(dim_name).rows) {
        if (auto v = row_as_of(dim_name, key, t)) out.push_back(std::move(*v));
    }
    return out;
}

std::vector<std::string> Warehouse::dimension_names() const {
    std::vector<std::string> out;
    for (const auto& [name, d] : dims_) out.push_back(name);
    return out;
}

std::vector<std::string> Warehouse::fact_names() const {
    std::vector<std::string> out;
    for (const auto& [name, f] : facts_) out.push_back(name);
    return out;
}

const std::map<std::string, Warehouse::RowChain>& Warehouse::rows_of(const std::string& dim_name) const {
    return dimension(dim_name).rows;
}

const std::vector<FactRow>& Warehouse::facts_of(const std::string& fact) const {
    auto it = facts_.find(fact);
    if (it == facts_.end()) throw NotFound("unknown fact '" + fact + "'");
    return it->second.rows;
}

ResultTable Warehouse::query_facts(const FactQuery& query) const {
    auto ft = facts_.find(query.fact);
    if (ft == facts_.end()) throw NotFound("unknown fact '" + query.fact + "'");
    const FactDef& def = ft->second.def;
    if (query.agg.empty()) throw BadRequest("query needs at least one aggregate");

    std::vector<std::string> problems;
    auto check_ref = [&](const AttrRef& ref) {
        if (ref.dimension == kTimeDimension) {
            if (!time_attribute(Date{}, ref.attr)) problems.push_back("unknown attribute Time." + ref.attr);
            return;
        }
        if (std::find(def.dims.begin(), def.dims.end(), ref.dimension) == def.dims.end()) {
            problems.push_back("fact " + def.name + " has no dimension '" + ref.dimension + "'");
            return;
        }
        const auto& attrs = dimension_def(ref.dimension).attrs;
        if (std::find(attrs.begin(), attrs.end(), ref.attr) == attrs.end()) {
            problems.push_back("unknown attribute " + ref.dimension + "." + ref.attr);
        }
    };
    for (const auto& p : query.where) check_ref(p.ref);
    for (const auto& g : query.group_by) check_ref(g);
    for (const auto& a : query.agg) {
        if (std::find(def.measures.begin(), def.measures.end(), a.column) == def.measures.end()) {
            problems.push_back("fact " + def.name + " has no measure '" + a.column + "'");
        }
    }
    if (!problems.empty()) throw ValidationError("invalid query", std::move(problems));

    auto lookup = [&](const FactRow& row, const AttrRef& ref) -> Cell {
        if (ref.dimension == kTimeDimension) return time_attribute(row.t, ref.attr);
        const Date at = query.as_of.value_or(row.t);
        auto version = row_as_of(ref.dimension, row.dim_keys.at(ref.dimension), at);
        if (!version) return std::nullopt;
        auto a = version->attrs.find(ref.attr);
        if (a == version->attrs.end()) return std::nullopt;
        return a->second;
    };

    std::map<std::vector<Cell>, std::vector<Accumulator>, decltype(&cell_less)> groups(&cell_less);
    for (const FactRow& row : ft->second.rows) {
        if (query.time_range && !query.time_range->covers(row.t)) continue;
        bool keep = true;
        for (const auto& p : query.where) {
            if (!predicate_holds(lookup(row, p.ref), p.op, p.value)) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        std::vector<Cell> key;
        key.reserve(query.group_by.size());
        for (const auto& g : query.group_by) key.push_back(lookup(row, g));
        auto [it, inserted] = groups.try_emplace(std::move(key), query.agg.size());
        for (std::size_t i = 0; i < query.agg.size(); ++i) it->second[i].add(row.values.at(query.agg[i].column));
    }

    ResultTable out;
    for (const auto& g : query.group_by) out.columns.push_back(g.dimension + "." + g.attr);
    for (const auto& a : query.agg) out.columns.push_back(std::string(to_string(a.fn)) + "(" + a.column + ")");
    for (const auto& [key, accs] : groups) {
        std::vector<Cell> row = key;
        for (std::size_t i = 0; i < query.agg.size(); ++i) row.push_back(Scalar{accs[i].result(query.agg[i].fn)});
        out.rows.push_back(std::move(row));
    }
    return out;
}

bool Warehouse::operator==(const Warehouse& other) const {
    if (dims_.size() != other.dims_.size() || facts_.size() != other.facts_.size()) return false;
    for (const auto& [name, d] : dims_) {
        auto it = other.dims_.find(name);
        if (it == other.dims_.end() || !(it->second.def == d.def) || !(it->second.rows == d.rows)) return false;
    }
    for (const auto& [name, f] : facts_) {
        auto it = other.facts_.find(name);
        if (it == other.facts_.end() || !(it->second.def == f.def) || !(it->second.rows == f.rows)) return false;
    }
    return true;
}

}  // namespace bizmeta

#include "bizmeta/codec.hpp"

#include "bizmeta/error.hpp"

namespace bizmeta::codec {

Json date_or_null(const std::optional<Date>& d) { return d ? Json(d->to_string()) : Json(nullptr); }

Json to_json(const Scalar& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return Json(*s);
    if (const auto* d = std::get_if<Date>(&value)) return Json{{"date", d->to_string()}};
    return Json(std::get<double>(value));
}

Json to_json(const Cell& value) { return value ? to_json(*value) : Json(nullptr); }

Json to_json(const Attributes& attrs) {
    Json out = Json::object();
    for (const auto& [k, v] : attrs) out[k] = to_json(v);
    return out;
}

Json to_json(const ConceptVersion& v) {
    return Json{{"id", v.logical_id},
                {"v", v.version_no},
                {"kind", std::string(to_string(v.kind))},
                {"name", v.name},
                {"description", v.description},
                {"attrs", to_json(v.attributes)},
                {"from", v.interval.from.to_string()},
                {"to", date_or_null(v.interval.to)}};
}

Json to_json(const AssociationVersion& v) {
    return Json{{"id", v.assoc_id},
                {"v", v.version_no},
                {"kind", std::string(to_string(v.kind))},
                {"src", v.src},
                {"dst", v.dst},
                {"from", v.interval.from.to_string()},
                {"to", date_or_null(v.interval.to)}};
}

Json to_json(const CrossLink& l) {
    Json out{{"id", l.link_id}, {"v", l.version_no}, {"kind", std::string(to_string(l.kind))}, {"concept", l.concept_id}};
    switch (l.kind) {
        case LinkKind::ConceptDimension: out["dim"] = l.target.dimension; break;
        case LinkKind::ConceptDimRow:
        case LinkKind::ActionDimRow:
            out["dim"] = l.target.dimension;
            out["key"] = l.target.key;
            break;
        case LinkKind::MeasureFact:
            out["fact"] = l.target.fact;
            out["column"] = l.target.column;
            break;
    }
    out["from"] = l.interval.from.to_string();
    out["to"] = date_or_null(l.interval.to);
    return out;
}

Json to_json(const DimensionDef& d) { return Json{{"name", d.name}, {"key", d.key_attr}, {"attrs", d.attrs}}; }

Json to_json(const DimensionRowVersion& r) {
    return Json{{"dim", r.dimension},
                {"key", r.key},
                {"v", r.version_no},
                {"attrs", to_json(r.attrs)},
                {"from", r.interval.from.to_string()},
                {"to", date_or_null(r.interval.to)}};
}

Json to_json(const FactDef& f) { return Json{{"name", f.name}, {"dims", f.dims}, {"measures", f.measures}}; }

Json to_json(const FactRow& r) {
    Json keys = Json::object();
    for (const auto& [d, k] : r.dim_keys) keys[d] = k;
    Json values = Json::object();
    for (const auto& [m, v] : r.values) values[m] = v;
    return Json{{"fact", r.fact}, {"keys", keys}, {"t", r.t.to_string()}, {"values", values}};
}

Json to_json(const ResultTable& t) {
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        Json cells = Json::array();
        for (const auto& c : row) cells.push_back(to_json(c));
        rows.push_back(std::move(cells));
    }
    return Json{{"columns", t.columns}, {"rows", rows}};
}

Json to_json(const DimensionView& v) {
    Json rows = Json::array();
    for (const auto& r : v.rows) rows.push_back(to_json(r));
    return Json{{"dimension", v.dimension}, {"rows", rows}};
}

Json to_json(const FactRef& f) { return Json{{"fact", f.fact}, {"column", f.column}}; }

Json to_json(const EvaluationRecord& r) {
    return Json{{"evaluation", r.evaluation_id}, {"associations", r.association_ids}};
}

Json to_json(const ActionRecord& r) {
    return Json{{"action", r.action_id},
                {"associations", r.association_ids},
                {"links", r.link_ids},
                {"free_standing", r.free_standing}};
}

Json versions(const std::vector<ConceptVersion>& chain) {
    Json out = Json::array();
    for (const auto& v : chain) out.push_back(to_json(v));
    return out;
}

Json to_json(const navql::Result& r) {
    if (const auto* set = std::get_if<navql::ConceptSetResult>(&r)) {
        return Json{{"type", "concepts"}, {"items", versions(set->concepts)}};
    }
    if (const auto* h = std::get_if<navql::HistoryResult>(&r)) {
        return Json{{"type", "history"}, {"id", h->id}, {"versions", versions(h->versions)}};
    }
    const auto& d = std::get<navql::DataResult>(r);
    return Json{{"type", "data"}, {"fact", d.fact}, {"measures", d.measures}, {"table", to_json(d.table)}};
}

Json concepts_as_of(const MetadataStore& store, const std::set<std::string>& ids, Date t) {
    Json out = Json::array();
    for (const auto& id : ids) {
        if (auto v = store.get_as_of(id, t)) out.push_back(to_json(*v));
    }
    return out;
}

Json concepts_during(const MetadataStore& store, const std::set<std::string>& ids, const ValidInterval& window) {
    Json out = Json::array();
    for (const auto& id : ids) {
        if (auto v = store.get_during(id, window)) out.push_back(to_json(*v));
    }
    return out;
}

// ---------------------------------------------------------------------------

Scalar scalar_from_json(const Json& j, const std::string& field) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.get<double>();
    if (j.is_object() && j.size() == 1 && j.contains("date") && j["date"].is_string()) {
        auto d = Date::try_parse(j["date"].get<std::string>());
        if (!d) throw BadRequest("field '" + field + "': invalid date");
        return *d;
    }
    throw BadRequest("field '" + field + "': expected text, number or {\"date\": ...}");
}

Attributes attributes_from_json(const Json& j, const std::string& field) {
    if (j.is_null()) return {};
    if (!j.is_object()) throw BadRequest("field '" + field + "': expected object");
    Attributes out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = scalar_from_json(it.value(), field + "." + it.key());
    return out;
}

Date date_from_json(const Json& j, const std::string& field) {
    if (!j.is_string()) throw BadRequest("field '" + field + "': expected date string");
    auto d = Date::try_parse(j.get<std::string>());
    if (!d) throw BadRequest("field '" + field + "': invalid date '" + j.get<std::string>() + "'");
    return *d;
}

std::optional<Date> optional_date_from_json(const Json& j, const std::string& field) {
    if (j.is_null()) return std::nullopt;
    return date_from_json(j, field);
}

std::string string_from_json(const Json& j, const std::string& field) {
    if (!j.is_string()) throw BadRequest("field '" + field + "': expected string");
    return j.get<std::string>();
}

namespace {

const Json& member(const Json& obj, const std::string& name) {
    static const Json null_json;
    if (!obj.is_object()) throw BadRequest("expected JSON object");
    auto it = obj.find(name);
    return it == obj.end() ? null_json : *it;
}

AttrRef attr_ref_from_json(const Json& j, const std::string& field) {
    return AttrRef{string_from_json(member(j, "dim"), field + ".dim"),
                   string_from_json(member(j, "attr"), field + ".attr")};
}

}  // namespace

FactQuery fact_query_from_json(const Json& j) {
    FactQuery q;
    q.fact = string_from_json(member(j, "fact"), "fact");
    if (const Json& where = member(j, "where"); !where.is_null()) {
        if (!where.is_array()) throw BadRequest("field 'where': expected array");
        for (const Json& p : where) {
            Predicate pred;
            pred.ref = attr_ref_from_json(p, "where");
            auto op = parse_compare_op(string_from_json(member(p, "op"), "where.op"));
            if (!op) throw BadRequest("field 'where.op': unknown operator");
            pred.op = *op;
            pred.value = scalar_from_json(member(p, "value"), "where.value");
            q.where.push_back(std::move(pred));
        }
    }
    if (const Json& group = member(j, "group_by"); !group.is_null()) {
        if (!group.is_array()) throw BadRequest("field 'group_by': expected array");
        for (const Json& g : group) q.group_by.push_back(attr_ref_from_json(g, "group_by"));
    }
    const Json& agg = member(j, "agg");
    if (!agg.is_array()) throw BadRequest("field 'agg': expected array");
    for (const Json& a : agg) {
        auto fn = parse_agg_fn(string_from_json(member(a, "fn"), "agg.fn"));
        if (!fn) throw BadRequest("field 'agg.fn': unknown aggregate");
        q.agg.push_back(Aggregate{*fn, string_from_json(member(a, "column"), "agg.column")});
    }
    if (const Json& range = member(j, "time_range"); !range.is_null()) {
        ValidInterval iv;
        iv.from = date_from_json(member(range, "from"), "time_range.from");
        iv.to = optional_date_from_json(member(range, "to"), "time_range.to");
        if (!iv.well_formed()) throw BadRequest("field 'time_range': from must precede to");
        q.time_range = iv;
    }
    q.as_of = optional_date_from_json(member(j, "as_of"), "as_of");
    return q;
}

}  // namespace bizmeta::codec

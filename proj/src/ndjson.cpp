#include "bizmeta/ndjson.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bizmeta/codec.hpp"
#include "bizmeta/error.hpp"

namespace bizmeta::ndjson {

using codec::Json;

namespace {

void emit(std::string& out, std::string_view rec, const Json& body) {
    Json line{{"rec", rec}};
    for (auto it = body.begin(); it != body.end(); ++it) line[it.key()] = it.value();
    out += line.dump();
    out += '\n';
}

// --- decoding helpers, all failures reported against a line ---------------

struct Field {
    const Json& rec;
    std::size_t line;

    const Json& at(const char* name) const {
        auto it = rec.find(name);
        if (it == rec.end()) throw ImportError(line, name, "missing field");
        return *it;
    }
    std::string str(const char* name) const {
        const Json& j = at(name);
        if (!j.is_string()) throw ImportError(line, name, "expected string");
        return j.get<std::string>();
    }
    int version(const char* name) const {
        const Json& j = at(name);
        if (!j.is_number_integer() || j.get<long long>() < 1 || j.get<long long>() > 1'000'000'000) {
            throw ImportError(line, name, "expected positive integer");
        }
        return j.get<int>();
    }
    std::uint64_t seq(const Json& obj, const char* name) const {
        auto it = obj.find(name);
        if (it == obj.end()) return 1;
        if (!it->is_number_unsigned()) throw ImportError(line, std::string("seq.") + name, "expected unsigned integer");
        return it->get<std::uint64_t>();
    }
    Date date(const char* name) const {
        const Json& j = at(name);
        if (!j.is_string()) throw ImportError(line, name, "expected date string");
        auto d = Date::try_parse(j.get<std::string>());
        if (!d) throw ImportError(line, name, "invalid date '" + j.get<std::string>() + "'");
        return *d;
    }
    std::optional<Date> optional_date(const char* name) const {
        if (at(name).is_null()) return std::nullopt;
        return date(name);
    }
    ValidInterval interval() const {
        ValidInterval iv{date("from"), optional_date("to")};
        if (!iv.well_formed()) throw ImportError(line, "to", "interval requires from < to");
        return iv;
    }
    Attributes attrs(const char* name) const {
        try {
            return codec::attributes_from_json(at(name), name);
        } catch (const BadRequest& e) {
            throw ImportError(line, name, e.what());
        }
    }
    std::vector<std::string> strings(const char* name) const {
        const Json& j = at(name);
        if (!j.is_array()) throw ImportError(line, name, "expected array of strings");
        std::vector<std::string> out;
        for (const Json& s : j) {
            if (!s.is_string()) throw ImportError(line, name, "expected array of strings");
            out.push_back(s.get<std::string>());
        }
        return out;
    }
};

template <typename T>
struct Located {
    std::size_t line;
    T value;
};

// Groups versions of one identifier and sorts them by version number.
template <typename T, typename IdOf>
std::map<std::string, std::vector<Located<T>>> group_chains(std::vector<Located<T>> items, IdOf id_of) {
    std::map<std::string, std::vector<Located<T>>> out;
    for (auto& item : items) out[id_of(item.value)].push_back(std::move(item));
    for (auto& [id, chain] : out) {
        std::stable_sort(chain.begin(), chain.end(),
                         [](const Located<T>& a, const Located<T>& b) { return a.value.version_no < b.value.version_no; });
    }
    return out;
}

template <typename T>
std::vector<T> strip(const std::vector<Located<T>>& chain) {
    std::vector<T> out;
    for (const auto& l : chain) out.push_back(l.value);
    return out;
}

// Re-raises domain errors from applying a record as ImportErrors for `line`.
template <typename Fn>
void at_line(std::size_t line, Fn fn) {
    try {
        fn();
    } catch (const ImportError&) {
        throw;
    } catch (const Error& e) {
        throw ImportError(line, "", e.what());
    }
}

}  // namespace

std::string export_repository(const Repository& repo) {
    std::string out;
    const MetadataStore& store = repo.store();
    const Warehouse& wh = repo.warehouse();
    emit(out, "meta",
         Json{{"format", kFormatName},
              {"version", kFormatVersion},
              {"seq", Json{{"concept", store.next_concept_seq()},
                           {"assoc", store.next_assoc_seq()},
                           {"link", repo.next_link_seq()}}}});
    for (const auto& [id, chain] : store.concepts()) {
        for (const auto& v : chain) emit(out, "concept", codec::to_json(v));
    }
    for (const auto& [id, chain] : store.associations()) {
        for (const auto& v : chain) emit(out, "assoc", codec::to_json(v));
    }
    for (const auto& dim : wh.dimension_names()) emit(out, "dimdef", codec::to_json(wh.dimension_def(dim)));
    for (const auto& dim : wh.dimension_names()) {
        for (const auto& [key, chain] : wh.rows_of(dim)) {
            for (const auto& v : chain) emit(out, "dimrow", codec::to_json(v));
        }
    }
    for (const auto& fact : wh.fact_names()) emit(out, "factdef", codec::to_json(wh.fact_def(fact)));
    for (const auto& fact : wh.fact_names()) {
        for (const auto& row : wh.facts_of(fact)) emit(out, "fact", codec::to_json(row));
    }
    for (const auto& [id, chain] : repo.links()) {
        for (const auto& l : chain) emit(out, "xlink", codec::to_json(l));
    }
    return out;
}

void import_into(Repository& repo, std::string_view text) {
    std::vector<Located<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>>> metas;
    std::vector<Located<ConceptVersion>> concepts;
    std::vector<Located<AssociationVersion>> assocs;
    std::vector<Located<DimensionDef>> dimdefs;
    std::vector<Located<DimensionRowVersion>> dimrows;
    std::vector<Located<FactDef>> factdefs;
    std::vector<Located<FactRow>> facts;
    std::vector<Located<CrossLink>> xlinks;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

        Json rec;
        try {
            rec = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ImportError(line_no, "", std::string("malformed JSON record: ") + e.what());
        }
        if (!rec.is_object()) throw ImportError(line_no, "", "record must be a JSON object");
        const Field f{rec, line_no};
        const std::string kind = f.str("rec");

        if (kind == "meta") {
            if (f.str("format") != kFormatName) throw ImportError(line_no, "format", "unsupported format");
            const Json& version = f.at("version");
            if (!version.is_number_integer() || version.get<int>() != kFormatVersion) {
                throw ImportError(line_no, "version", "unsupported format version");
            }
            const Json& seq = f.at("seq");
            if (!seq.is_object()) throw ImportError(line_no, "seq", "expected object");
            metas.push_back({line_no, {f.seq(seq, "concept"), f.seq(seq, "assoc"), f.seq(seq, "link")}});
        } else if (kind == "concept") {
            ConceptVersion v;
            v.logical_id = f.str("id");
            v.version_no = f.version("v");
            auto k = parse_concept_kind(f.str("kind"));
            if (!k) throw ImportError(line_no, "kind", "unknown concept kind");
            v.kind = *k;
            v.name = f.str("name");
            v.description = f.str("description");
            v.attributes = f.attrs("attrs");
            v.interval = f.interval();
            concepts.push_back({line_no, std::move(v)});
        } else if (kind == "assoc") {
            AssociationVersion v;
            v.assoc_id = f.str("id");
            v.version_no = f.version("v");
            auto k = parse_association_kind(f.str("kind"));
            if (!k) throw ImportError(line_no, "kind", "unknown association kind");
            v.kind = *k;
            v.src = f.str("src");
            v.dst = f.str("dst");
            v.interval = f.interval();
            assocs.push_back({line_no, std::move(v)});
        } else if (kind == "dimdef") {
            dimdefs.push_back({line_no, DimensionDef{f.str("name"), f.str("key"), f.strings("attrs")}});
        } else if (kind == "dimrow") {
            DimensionRowVersion r;
            r.dimension = f.str("dim");
            r.key = f.str("key");
            r.version_no = f.version("v");
            r.attrs = f.attrs("attrs");
            r.interval = f.interval();
            dimrows.push_back({line_no, std::move(r)});
        } else if (kind == "factdef") {
            factdefs.push_back({line_no, FactDef{f.str("name"), f.strings("dims"), f.strings("measures")}});
        } else if (kind == "fact") {
            FactRow row;
            row.fact = f.str("fact");
            row.t = f.date("t");
            const Json& keys = f.at("keys");
            if (!keys.is_object()) throw ImportError(line_no, "keys", "expected object");
            for (auto it = keys.begin(); it != keys.end(); ++it) {
                if (!it->is_string()) throw ImportError(line_no, "keys." + it.key(), "expected string");
                row.dim_keys[it.key()] = it->get<std::string>();
            }
            const Json& values = f.at("values");
            if (!values.is_object()) throw ImportError(line_no, "values", "expected object");
            for (auto it = values.begin(); it != values.end(); ++it) {
                if (!it->is_number()) throw ImportError(line_no, "values." + it.key(), "expected number");
                row.values[it.key()] = it->get<double>();
            }
            facts.push_back({line_no, std::move(row)});
        } else if (kind == "xlink") {
            CrossLink l;
            l.link_id = f.str("id");
            l.version_no = f.version("v");
            auto k = parse_link_kind(f.str("kind"));
            if (!k) throw ImportError(line_no, "kind", "unknown link kind");
            l.kind = *k;
            l.concept_id = f.str("concept");
            switch (l.kind) {
                case LinkKind::ConceptDimension: l.target = LinkTarget::dimension_of(f.str("dim")); break;
                case LinkKind::ConceptDimRow:
                case LinkKind::ActionDimRow: l.target = LinkTarget::row(f.str("dim"), f.str("key")); break;
                case LinkKind::MeasureFact: l.target = LinkTarget::fact_column(f.str("fact"), f.str("column")); break;
            }
            l.interval = f.interval();
            xlinks.push_back({line_no, std::move(l)});
        } else {
            throw ImportError(line_no, "rec", "unknown record kind '" + kind + "'");
        }
    }

    Repository staged = repo;
    for (const auto& m : metas) {
        staged.store().bump_sequences(std::get<0>(m.value), std::get<1>(m.value));
        staged.bump_link_sequence(std::get<2>(m.value));
    }
    for (const auto& [id, chain] : group_chains(std::move(concepts), [](const ConceptVersion& v) { return v.logical_id; })) {
        at_line(chain.front().line, [&] { staged.store().insert_concept_chain(strip(chain)); });
    }
    for (const auto& [id, chain] : group_chains(std::move(assocs), [](const AssociationVersion& v) { return v.assoc_id; })) {
        at_line(chain.front().line, [&] { staged.store().insert_association_chain(strip(chain)); });
    }
    for (const auto& d : dimdefs) at_line(d.line, [&] { staged.warehouse().define_dimension(d.value); });
    for (const auto& [id, chain] : group_chains(std::move(dimrows), [](const DimensionRowVersion& r) {
             return r.dimension + '\x1f' + r.key;
         })) {
        at_line(chain.front().line, [&] { staged.warehouse().insert_row_chain(strip(chain)); });
    }
    for (const auto& d : factdefs) at_line(d.line, [&] { staged.warehouse().define_fact(d.value); });
    for (const auto& row : facts) at_line(row.line, [&] { staged.warehouse().insert_facts({row.value}); });
    for (const auto& [id, chain] : group_chains(std::move(xlinks), [](const CrossLink& l) { return l.link_id; })) {
        at_line(chain.front().line, [&] { staged.insert_link_chain(strip(chain)); });
    }
    repo = std::move(staged);
}

Repository import_repository(std::string_view text) {
    Repository repo;
    import_into(repo, text);
    return repo;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw BadRequest("cannot write '" + tmp + "'");
        out << content;
        if (!out.flush()) throw BadRequest("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace bizmeta::ndjson

#include "bizmeta/service.hpp"

#include <httplib.h>

#include "bizmeta/codec.hpp"
#include "bizmeta/error.hpp"
#include "bizmeta/ndjson.hpp"

namespace bizmeta {

using codec::Json;

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::not_found: return 404;
        case ErrorCode::conflict: return 409;
        case ErrorCode::validation:
        case ErrorCode::bad_request:
        case ErrorCode::parse_error: return 400;
    }
    return 400;
}

namespace {

HttpResponse respond(int status, const Json& body) { return HttpResponse{status, body.dump() + "\n"}; }

HttpResponse error_response(const Error& e) {
    Json detail = nullptr;
    if (const auto* v = dynamic_cast<const ValidationError*>(&e)) {
        detail = Json{{"violations", v->violations()}};
    } else if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
        detail = Json{{"offset", p->offset()}, {"expected", p->expected()}};
    } else if (const auto* i = dynamic_cast<const ImportError*>(&e)) {
        detail = Json{{"line", i->line()}, {"field", i->field()}};
    }
    return respond(http_status(e.code()),
                   Json{{"error", Json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}, {"detail", detail}}}});
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        std::size_t end = path.find('/', pos);
        if (end == std::string::npos) end = path.size();
        if (end > pos) out.push_back(path.substr(pos, end - pos));
        pos = end + 1;
    }
    return out;
}

Json parse_body(const std::string& body) {
    if (body.empty()) return Json::object();
    try {
        Json j = Json::parse(body);
        if (!j.is_object()) throw BadRequest("request body must be a JSON object");
        return j;
    } catch (const Json::parse_error& e) {
        throw BadRequest(std::string("malformed JSON body: ") + e.what());
    }
}

const Json& member(const Json& obj, const char* name) {
    static const Json null_json;
    auto it = obj.find(name);
    return it == obj.end() ? null_json : *it;
}

std::optional<std::string> optional_string(const Json& obj, const char* name) {
    const Json& j = member(obj, name);
    if (j.is_null()) return std::nullopt;
    return codec::string_from_json(j, name);
}

std::optional<std::string> query_param(const HttpRequest& r, const char* name) {
    auto it = r.query.find(name);
    if (it == r.query.end() || it->second.empty()) return std::nullopt;
    return it->second;
}

Date date_param(const HttpRequest& r, const char* name, Date fallback) {
    auto v = query_param(r, name);
    return v ? Date::parse(*v) : fallback;
}

Date required_date_param(const HttpRequest& r, const char* name) {
    auto v = query_param(r, name);
    if (!v) throw BadRequest("query parameter '" + std::string(name) + "' is required");
    return Date::parse(*v);
}

Json methods_table() {
    Json kinds = Json::object();
    for (ConceptKind k : kAllConceptKinds) kinds[std::string(to_string(k))] = menu_for(k);
    Json dispatch_rows = Json::array();
    for (const auto& m : traversal_method_names()) {
        for (ConceptKind k : kAllConceptKinds) {
            if (auto e = dispatch(m, k)) {
                dispatch_rows.push_back(Json{{"method", m},
                                             {"source", std::string(to_string(k))},
                                             {"association", std::string(to_string(e->association))},
                                             {"direction", std::string(to_string(e->direction))}});
            }
        }
    }
    return Json{{"kinds", kinds}, {"dispatch", dispatch_rows}};
}

}  // namespace

Service::Service(Repository initial, std::string store_path)
    : current_(std::make_shared<const Repository>(std::move(initial))), store_path_(std::move(store_path)) {}

Service::~Service() { stop(); }

std::shared_ptr<const Repository> Service::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return current_;
}

template <typename Fn>
HttpResponse Service::write(Fn fn) {
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<Repository>(*snapshot());
    HttpResponse response = fn(*next);
    if (!store_path_.empty()) ndjson::write_file_atomic(store_path_, ndjson::export_repository(*next));
    std::lock_guard lock(snapshot_mutex_);
    current_ = std::move(next);
    return response;
}

HttpResponse Service::handle(const HttpRequest& req) {
    try {
        const auto seg = split_path(req.path);
        const std::string& m = req.method;
        const auto n = seg.size();

        if (m == "OPTIONS") return HttpResponse{204, ""};

        if (n == 1 && seg[0] == "methods" && m == "GET") return respond(200, methods_table());

        if (n >= 1 && seg[0] == "concepts") {
            if (n == 1 && m == "GET") {
                auto repo = snapshot();
                const Date t = date_param(req, "asof", repo->max_known_date());
                std::set<ConceptKind> kinds(kAllConceptKinds.begin(), kAllConceptKinds.end());
                if (auto k = query_param(req, "kind")) {
                    auto sel = navql::selector_kinds(*k);
                    if (!sel) throw BadRequest("unknown kind '" + *k + "'");
                    kinds = *sel;
                }
                const auto name = query_param(req, "name");
                std::set<std::string> ids;
                for (ConceptKind k : kinds) {
                    for (const auto& id : repo->store().ids_of_kind(k)) {
                        auto v = repo->store().get_as_of(id, t);
                        if (v && (!name || v->name == *name)) ids.insert(id);
                    }
                }
                return respond(200, codec::concepts_as_of(repo->store(), ids, t));
            }
            if (n == 1 && m == "POST") {
                const Json body = parse_body(req.body);
                auto kind = parse_concept_kind(codec::string_from_json(member(body, "kind"), "kind"));
                if (!kind) throw BadRequest("unknown concept kind");
                const std::string name = codec::string_from_json(member(body, "name"), "name");
                const std::string description = optional_string(body, "description").value_or("");
                const Attributes attrs = codec::attributes_from_json(member(body, "attrs"), "attrs");
                const Date from = codec::date_from_json(member(body, "from"), "from");
                const auto id = optional_string(body, "id");
                return write([&](Repository& r) {
                    const std::string created = r.store().create_concept(*kind, name, description, attrs, from, id);
                    return respond(201, codec::to_json(r.store().get_history(created).back()));
                });
            }
            if (n == 2 && m == "GET") {
                auto repo = snapshot();
                const auto& chain = repo->store().get_history(seg[1]);
                const Date t = date_param(req, "asof", repo->max_known_date());
                auto v = repo->store().get_as_of(seg[1], t);
                if (!v) throw NotFound("concept '" + seg[1] + "' has no version at " + t.to_string());
                (void)chain;
                return respond(200, codec::to_json(*v));
            }
            if (n == 2 && m == "PATCH") {
                const Json body = parse_body(req.body);
                ConceptChanges changes;
                changes.name = optional_string(body, "name");
                changes.description = optional_string(body, "description");
                if (!member(body, "attrs").is_null()) changes.attributes = codec::attributes_from_json(body["attrs"], "attrs");
                const Date at = codec::date_from_json(member(body, "effective_from"), "effective_from");
                return write([&](Repository& r) {
                    r.store().update_concept(seg[1], changes, at);
                    return respond(200, codec::to_json(r.store().get_history(seg[1]).back()));
                });
            }
            if (n == 2 && m == "DELETE") {
                const Date at = required_date_param(req, "at");
                return write([&](Repository& r) {
                    r.store().retire_concept(seg[1], at);
                    return respond(200, codec::to_json(r.store().get_history(seg[1]).back()));
                });
            }
            if (n == 3 && seg[2] == "history" && m == "GET") {
                return respond(200, codec::versions(snapshot()->store().get_history(seg[1])));
            }
            if (n == 3 && seg[2] == "actions" && m == "GET") {
                auto repo = snapshot();
                const Date t = date_param(req, "asof", repo->max_known_date());
                return respond(200, codec::concepts_as_of(repo->store(), repo->actions_targeting(seg[1], t), t));
            }
            if (n == 4 && seg[2] == "nav" && m == "GET") {
                auto repo = snapshot();
                const std::string& id = seg[1];
                const std::string& method = seg[3];
                if (!repo->store().contains(id)) throw NotFound("unknown concept '" + id + "'");
                const auto from = query_param(req, "from");
                const auto to = query_param(req, "to");
                if (method == "history") return respond(200, codec::versions(repo->store().get_history(id)));
                if (from || to) {
                    if (!from || !to) throw BadRequest("'from' and 'to' must be given together");
                    const ValidInterval window = ValidInterval::between(Date::parse(*from), Date::parse(*to));
                    if (!window.well_formed()) throw BadRequest("'from' must precede 'to'");
                    if (method == "getFacts") return respond(200, codec::to_json(repo->get_facts_during(id, window)));
                    return respond(200, codec::concepts_during(repo->store(), repo->navigate_during(id, method, window),
                                                               window));
                }
                const Date t = date_param(req, "asof", repo->max_known_date());
                if (method == "getDimension") return respond(200, codec::to_json(repo->get_dimension(id, t)));
                if (method == "getFacts") return respond(200, codec::to_json(repo->get_facts(id, t)));
                return respond(200, codec::concepts_as_of(repo->store(), repo->navigate(id, method, t), t));
            }
        }

        if (n >= 1 && seg[0] == "associations") {
            if (n == 1 && m == "POST") {
                const Json body = parse_body(req.body);
                auto kind = parse_association_kind(codec::string_from_json(member(body, "kind"), "kind"));
                if (!kind) throw BadRequest("unknown association kind");
                const std::string src = codec::string_from_json(member(body, "src"), "src");
                const std::string dst = codec::string_from_json(member(body, "dst"), "dst");
                const Date from = codec::date_from_json(member(body, "from"), "from");
                const auto id = optional_string(body, "id");
                return write([&](Repository& r) {
                    const std::string created = r.store().create_association(*kind, src, dst, from, id);
                    return respond(201, codec::to_json(r.store().association_history(created).back()));
                });
            }
            if (n == 2 && m == "DELETE") {
                const Date at = required_date_param(req, "at");
                return write([&](Repository& r) {
                    r.store().end_association(seg[1], at);
                    return respond(200, codec::to_json(r.store().association_history(seg[1]).back()));
                });
            }
        }

        if (n >= 1 && seg[0] == "links") {
            if (n == 1 && m == "POST") {
                const Json body = parse_body(req.body);
                auto kind = parse_link_kind(codec::string_from_json(member(body, "kind"), "kind"));
                if (!kind) throw BadRequest("unknown link kind");
                const std::string concept_id = codec::string_from_json(member(body, "concept"), "concept");
                LinkTarget target{optional_string(body, "dim").value_or(""), optional_string(body, "key").value_or(""),
                                  optional_string(body, "fact").value_or(""),
                                  optional_string(body, "column").value_or("")};
                const Date from = codec::date_from_json(member(body, "from"), "from");
                const auto id = optional_string(body, "id");
                return write([&](Repository& r) {
                    const std::string created = r.link(*kind, concept_id, target, from, id);
                    return respond(201, codec::to_json(r.link_history(created).back()));
                });
            }
            if (n == 2 && m == "DELETE") {
                const Date at = required_date_param(req, "at");
                return write([&](Repository& r) {
                    r.end_link(seg[1], at);
                    return respond(200, codec::to_json(r.link_history(seg[1]).back()));
                });
            }
        }

        if (n >= 2 && seg[0] == "warehouse") {
            if (n == 2 && seg[1] == "query" && m == "POST") {
                const FactQuery q = codec::fact_query_from_json(parse_body(req.body));
                return respond(200, codec::to_json(snapshot()->warehouse().query_facts(q)));
            }
            if (n == 4 && seg[1] == "dims" && seg[3] == "rows" && m == "GET") {
                auto repo = snapshot();
                const Date t = date_param(req, "asof", repo->max_known_date());
                Json rows = Json::array();
                for (const auto& r : repo->warehouse().rows_as_of(seg[2], t)) rows.push_back(codec::to_json(r));
                return respond(200, rows);
            }
            if (n == 6 && seg[1] == "dims" && seg[3] == "rows" && m == "GET") {
                auto repo = snapshot();
                if (seg[5] == "concepts") {
                    const Date t = date_param(req, "asof", repo->max_known_date());
                    return respond(200, codec::concepts_as_of(repo->store(),
                                                              repo->row_to_concepts(seg[2], seg[4], t), t));
                }
                if (seg[5] == "history") {
                    Json rows = Json::array();
                    for (const auto& r : repo->warehouse().row_history(seg[2], seg[4])) rows.push_back(codec::to_json(r));
                    return respond(200, rows);
                }
            }
            if (n == 4 && seg[1] == "facts" && seg[3] == "measures" && m == "GET") {
                auto repo = snapshot();
                const Date t = date_param(req, "asof", repo->max_known_date());
                return respond(200, codec::concepts_as_of(repo->store(), repo->fact_to_measures(seg[2], t), t));
            }
        }

        if (n == 1 && seg[0] == "query" && m == "POST") {
            const Json body = parse_body(req.body);
            const std::string text = codec::string_from_json(member(body, "q"), "q");
            auto repo = snapshot();
            const Date now = member(body, "now").is_null() ? repo->max_known_date()
                                                            : codec::date_from_json(body["now"], "now");
            return respond(200, codec::to_json(navql::evaluate(navql::parse(text), *repo, now)));
        }

        if (n == 1 && seg[0] == "evaluations" && m == "POST") {
            const Json body = parse_body(req.body);
            EvaluationInput in;
            in.goal_id = optional_string(body, "goal");
            in.measure_id = optional_string(body, "measure");
            in.text = codec::string_from_json(member(body, "text"), "text");
            in.at = codec::date_from_json(member(body, "at"), "at");
            in.provenance = optional_string(body, "provenance");
            return write([&](Repository& r) { return respond(201, codec::to_json(r.record_evaluation(in))); });
        }

        if (n == 1 && seg[0] == "actions" && m == "POST") {
            const Json body = parse_body(req.body);
            ActionInput in;
            in.text = codec::string_from_json(member(body, "text"), "text");
            in.at = codec::date_from_json(member(body, "at"), "at");
            if (const Json& evals = member(body, "evaluations"); !evals.is_null()) {
                if (!evals.is_array()) throw BadRequest("field 'evaluations': expected array");
                for (const Json& e : evals) in.evaluation_ids.push_back(codec::string_from_json(e, "evaluations"));
            }
            if (const Json& targets = member(body, "targets"); !targets.is_null()) {
                if (!targets.is_array()) throw BadRequest("field 'targets': expected array");
                for (const Json& t : targets) {
                    if (!t.is_object()) throw BadRequest("field 'targets': expected objects");
                    in.targets.emplace_back(codec::string_from_json(member(t, "dim"), "targets.dim"),
                                            codec::string_from_json(member(t, "key"), "targets.key"));
                }
            }
            return write([&](Repository& r) { return respond(201, codec::to_json(r.record_action(in))); });
        }

        throw NotFound("no route for " + m + " " + req.path);
    } catch (const Error& e) {
        return error_response(e);
    } catch (const std::exception& e) {
        return error_response(BadRequest(e.what()));
    }
}

void Service::install_routes() {
    auto adapter = [this](const httplib::Request& in, httplib::Response& out) {
        HttpRequest req;
        req.method = in.method;
        req.path = in.path;
        for (const auto& [k, v] : in.params) req.query.emplace(k, v);
        req.body = in.body;
        HttpResponse res = handle(req);
        out.status = res.status;
        out.set_header("Access-Control-Allow-Origin", "*");
        out.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, DELETE, OPTIONS");
        out.set_header("Access-Control-Allow-Headers", "Content-Type");
        if (!res.body.empty()) out.set_content(res.body, "application/json");
    };
    server_->Get(".*", adapter);
    server_->Post(".*", adapter);
    server_->Patch(".*", adapter);
    server_->Delete(".*", adapter);
    server_->Options(".*", adapter);
}

bool Service::listen(const std::string& host, int port) {
    if (!server_) {
        server_ = std::make_unique<httplib::Server>();
        install_routes();
    }
    return server_->listen(host, port);
}

int Service::bind_any_port(const std::string& host) {
    if (!server_) {
        server_ = std::make_unique<httplib::Server>();
        install_routes();
    }
    return server_->bind_to_any_port(host);
}

bool Service::listen_after_bind() { return server_ && server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

bool Service::is_running() const { return server_ && server_->is_running(); }

}  // namespace bizmeta

#include "bizmeta/linkage.hpp"

#include <algorithm>
#include <array>

#include "bizmeta/error.hpp"

namespace bizmeta {

namespace {

constexpr std::array<std::string_view, 4> kLinkKindNames = {"ConceptDimension", "ConceptDimRow", "MeasureFact",
                                                            "ActionDimRow"};

bool is_goal(ConceptKind k) { return k == ConceptKind::Goal; }
bool is_measure(ConceptKind k) { return k == ConceptKind::Measure; }
bool is_process(ConceptKind k) { return k == ConceptKind::Process; }

std::set<ConceptKind> kinds_admitted(KindRole role) {
    std::set<ConceptKind> out;
    for (ConceptKind k : kAllConceptKinds) {
        if (admits(role, k)) out.insert(k);
    }
    return out;
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
    return out;
}

}  // namespace

std::string_view to_string(LinkKind kind) { return kLinkKindNames[static_cast<std::size_t>(kind)]; }

std::optional<LinkKind> parse_link_kind(std::string_view name) {
    for (std::size_t i = 0; i < kLinkKindNames.size(); ++i) {
        if (kLinkKindNames[i] == name) return static_cast<LinkKind>(i);
    }
    return std::nullopt;
}

const std::vector<std::string>& traversal_method_names() {
    static const std::vector<std::string> names = {
        "getSubEntity", "getSubGoals", "getSubProcesses",    "getProcesses",    "getGoals",
        "getMeasures",  "getEvaluation", "getAffectingEvents", "getActionsTaken",
    };
    return names;
}

bool is_traversal_method(std::string_view method) {
    const auto& names = traversal_method_names();
    return std::find(names.begin(), names.end(), method) != names.end();
}

std::optional<DispatchEntry> dispatch(std::string_view method, ConceptKind source) {
    using A = AssociationKind;
    constexpr Direction fwd = Direction::forward;
    constexpr Direction rev = Direction::reverse;
    if (method == "getSubEntity" && is_entity(source)) return DispatchEntry{A::SubEntity, fwd};
    if (method == "getSubGoals" && is_goal(source)) return DispatchEntry{A::SubGoal, fwd};
    if (method == "getSubProcesses" && is_process(source)) return DispatchEntry{A::SubProcess, fwd};
    if (method == "getProcesses" && is_entity(source)) return DispatchEntry{A::EntityProcess, fwd};
    if (method == "getGoals") {
        if (is_entity(source)) return DispatchEntry{A::EGoal, fwd};
        if (is_process(source)) return DispatchEntry{A::PGoal, fwd};
        if (is_measure(source)) return DispatchEntry{A::GoalMeasure, rev};
    }
    if (method == "getMeasures" && is_goal(source)) return DispatchEntry{A::GoalMeasure, fwd};
    if (method == "getEvaluation") {
        if (is_goal(source)) return DispatchEntry{A::EvalGoal, rev};
        if (is_measure(source)) return DispatchEntry{A::EvalMeasure, rev};
    }
    // Measures carry the fixed menu {getGoals, getEvaluation, getFacts, history}.
    if (method == "getAffectingEvents" && !is_measure(source)) return DispatchEntry{A::EventImpacts, rev};
    if (method == "getActionsTaken" && !is_measure(source)) return DispatchEntry{A::ActionConcept, rev};
    return std::nullopt;
}

std::vector<std::string> traversal_methods_for(ConceptKind kind) {
    std::vector<std::string> out;
    for (const auto& m : traversal_method_names()) {
        if (dispatch(m, kind)) out.push_back(m);
    }
    return out;
}

std::vector<std::string> menu_for(ConceptKind kind) {
    std::vector<std::string> out = traversal_methods_for(kind);
    if (is_entity(kind) || kind == ConceptKind::BusinessConcept) out.emplace_back("getDimension");
    if (is_measure(kind)) out.emplace_back("getFacts");
    out.emplace_back("history");
    return out;
}

std::set<ConceptKind> result_kinds(std::string_view method, ConceptKind source) {
    auto entry = dispatch(method, source);
    if (!entry) return {};
    const EndpointConstraint c = endpoint_constraint(entry->association);
    return kinds_admitted(entry->direction == Direction::forward ? c.target : c.source);
}

// ---------------------------------------------------------------------------

std::vector<std::string> Repository::validate_link(const CrossLink& link) const {
    std::vector<std::string> out;
    if (!store_.contains(link.concept_id)) {
        out.push_back("unknown concept '" + link.concept_id + "'");
        return out;
    }
    const ConceptKind kind = store_.kind_of(link.concept_id);
    const LinkTarget& t = link.target;
    switch (link.kind) {
        case LinkKind::ConceptDimension:
            if (!warehouse_.has_dimension(t.dimension)) out.push_back("unknown dimension '" + t.dimension + "'");
            break;
        case LinkKind::ActionDimRow:
            if (kind != ConceptKind::Action) {
                out.push_back("ActionDimRow requires an Action concept, got " + std::string(to_string(kind)));
            }
            [[fallthrough]];
        case LinkKind::ConceptDimRow:
            if (!warehouse_.has_dimension(t.dimension)) {
                out.push_back("unknown dimension '" + t.dimension + "'");
            } else if (!warehouse_.has_key(t.dimension, t.key)) {
                out.push_back("unknown row '" + t.key + "' in dimension '" + t.dimension + "'");
            }
            break;
        case LinkKind::MeasureFact:
            if (kind != ConceptKind::Measure) {
                out.push_back("MeasureFact requires a Measure concept, got " + std::string(to_string(kind)));
            }
            if (!warehouse_.has_fact(t.fact)) {
                out.push_back("unknown fact '" + t.fact + "'");
            } else {
                const auto& measures = warehouse_.fact_def(t.fact).measures;
                if (std::find(measures.begin(), measures.end(), t.column) == measures.end()) {
                    out.push_back("fact '" + t.fact + "' has no measure column '" + t.column + "'");
                }
            }
            break;
    }
    if (!link.interval.well_formed()) out.emplace_back("from < to");
    return out;
}

void Repository::index_link(const CrossLink& link) {
    links_by_concept_[link.concept_id].push_back(link.link_id);
    if (!link.target.dimension.empty()) links_by_dimension_[link.target.dimension].push_back(link.link_id);
    if (!link.target.fact.empty()) links_by_fact_[link.target.fact].push_back(link.link_id);
}

std::string Repository::link(LinkKind kind, const std::string& concept_id, const LinkTarget& target, Date from,
                             std::optional<std::string> requested_id) {
    CrossLink l;
    l.kind = kind;
    l.concept_id = concept_id;
    switch (kind) {
        case LinkKind::ConceptDimension: l.target = LinkTarget::dimension_of(target.dimension); break;
        case LinkKind::ConceptDimRow:
        case LinkKind::ActionDimRow: l.target = LinkTarget::row(target.dimension, target.key); break;
        case LinkKind::MeasureFact: l.target = LinkTarget::fact_column(target.fact, target.column); break;
    }
    l.interval = ValidInterval::open_from(from);
    if (!store_.contains(concept_id)) throw NotFound("unknown concept '" + concept_id + "'");
    if (auto violations = validate_link(l); !violations.empty()) {
        throw ValidationError("invalid link", std::move(violations));
    }
    if (requested_id) {
        if (!is_valid_identifier(*requested_id)) throw BadRequest("invalid identifier '" + *requested_id + "'");
        if (links_.count(*requested_id)) throw Conflict("identifier '" + *requested_id + "' already exists");
        l.link_id = *requested_id;
    } else {
        do {
            l.link_id = "l" + std::to_string(next_link_seq_++);
        } while (links_.count(l.link_id));
    }
    index_link(l);
    std::string id = l.link_id;
    links_.emplace(id, LinkChain{std::move(l)});
    return id;
}

void Repository::end_link(const std::string& link_id, Date at) {
    auto it = links_.find(link_id);
    if (it == links_.end()) throw NotFound("unknown link '" + link_id + "'");
    CrossLink& latest = it->second.back();
    if (!latest.interval.is_open()) throw Conflict("link already ended: '" + link_id + "'");
    if (!(latest.interval.from < at)) {
        throw Conflict("end date " + at.to_string() + " is not after from " + latest.interval.from.to_string());
    }
    latest.interval.to = at;
}

const Repository::LinkChain& Repository::link_history(const std::string& link_id) const {
    auto it = links_.find(link_id);
    if (it == links_.end()) throw NotFound("unknown link '" + link_id + "'");
    return it->second;
}

void Repository::insert_link_chain(LinkChain chain) {
    if (chain.empty()) throw BadRequest("empty link chain");
    const std::string id = chain.front().link_id;
    if (!is_valid_identifier(id)) throw BadRequest("invalid identifier '" + id + "'");
    if (links_.count(id)) throw Conflict("identifier '" + id + "' already exists");
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const CrossLink& l = chain[i];
        if (l.link_id != id) violations.push_back("mixed link ids in chain");
        if (l.version_no != static_cast<int>(i + 1)) violations.push_back("version_no must be consecutive from 1");
        if (l.kind != chain.front().kind || l.concept_id != chain.front().concept_id ||
            !(l.target == chain.front().target)) {
            violations.push_back("kind, concept or target change between versions");
        }
        for (auto& msg : validate_link(l)) violations.push_back(std::move(msg));
    }
    for (auto& msg : validate_chain(chain, [](const CrossLink& l) -> const ValidInterval& { return l.interval; })) {
        violations.push_back(std::move(msg));
    }
    if (!violations.empty()) throw ValidationError("invalid link chain '" + id + "'", std::move(violations));
    index_link(chain.front());
    links_.emplace(id, std::move(chain));
}

DispatchEntry Repository::resolve_method(const std::string& id, std::string_view method) const {
    const ConceptKind kind = store_.kind_of(id);
    auto entry = dispatch(method, kind);
    if (!entry) {
        throw BadRequest("method '" + std::string(method) + "' is not valid for " + std::string(to_string(kind)) +
                         "; valid methods: " + join(traversal_methods_for(kind)));
    }
    return *entry;
}

std::set<std::string> Repository::navigate(const std::string& id, std::string_view method, Date t) const {
    const DispatchEntry e = resolve_method(id, method);
    return store_.traverse(id, e.association, e.direction, t);
}

std::set<std::string> Repository::navigate_during(const std::string& id, std::string_view method,
                                                  const ValidInterval& window) const {
    const DispatchEntry e = resolve_method(id, method);
    return store_.traverse_during(id, e.association, e.direction, window);
}

template <typename Admit>
std::vector<const CrossLink*> Repository::links_where(const std::vector<std::string>& ids, Admit admit) const {
    std::vector<const CrossLink*> out;
    for (const auto& link_id : ids) {
        for (const CrossLink& l : links_.at(link_id)) {
            if (admit(l)) {
                out.push_back(&l);
                break;
            }
        }
    }
    return out;
}

namespace {

const std::vector<std::string>& bucket(const std::map<std::string, std::vector<std::string>>& index,
                                       const std::string& key) {
    static const std::vector<std::string> empty;
    auto it = index.find(key);
    return it == index.end() ? empty : it->second;
}

}  // namespace

DimensionView Repository::get_dimension(const std::string& concept_id, Date t) const {
    if (!store_.contains(concept_id)) throw NotFound("unknown concept '" + concept_id + "'");
    auto found = links_where(bucket(links_by_concept_, concept_id), [&](const CrossLink& l) {
        return l.kind == LinkKind::ConceptDimension && l.interval.covers(t);
    });
    if (found.empty()) {
        throw NotFound("concept '" + concept_id + "' is not dimension-mapped at " + t.to_string());
    }
    const std::string& dim = found.front()->target.dimension;
    return DimensionView{dim, warehouse_.rows_as_of(dim, t)};
}

FactRef Repository::get_facts(const std::string& measure_id, Date t) const {
    return get_facts_during(measure_id, ValidInterval::between(t, t + 1));
}

FactRef Repository::get_facts_during(const std::string& measure_id, const ValidInterval& window) const {
    const ConceptKind kind = store_.kind_of(measure_id);
    if (kind != ConceptKind::Measure) {
        throw BadRequest("method 'getFacts' is not valid for " + std::string(to_string(kind)) +
                         "; valid methods: " + join(menu_for(kind)));
    }
    const CrossLink* best = nullptr;
    for (const auto& link_id : bucket(links_by_concept_, measure_id)) {
        for (const CrossLink& l : links_.at(link_id)) {
            if (l.kind != LinkKind::MeasureFact || !l.interval.overlaps(window)) continue;
            if (!best || best->interval.from < l.interval.from) best = &l;
        }
    }
    if (!best) throw NotFound("measure '" + measure_id + "' has no fact link in " + window.to_string());
    return FactRef{best->target.fact, best->target.column};
}

std::set<std::string> Repository::row_to_concepts(const std::string& dimension, const std::string& key,
                                                  Date t) const {
    std::set<std::string> out;
    if (!warehouse_.has_dimension(dimension) || !warehouse_.row_as_of(dimension, key, t)) return out;
    for (const CrossLink* l : links_where(bucket(links_by_dimension_, dimension), [&](const CrossLink& l) {
             if (!l.interval.covers(t)) return false;
             if (l.kind == LinkKind::ConceptDimension) return true;
             return l.kind == LinkKind::ConceptDimRow && l.target.key == key;
         })) {
        if (store_.live_at(l->concept_id, t)) out.insert(l->concept_id);
    }
    return out;
}

std::set<std::string> Repository::fact_to_measures(const std::string& fact, Date t) const {
    if (!warehouse_.has_fact(fact)) throw NotFound("unknown fact '" + fact + "'");
    std::set<std::string> out;
    for (const CrossLink* l : links_where(bucket(links_by_fact_, fact), [&](const CrossLink& l) {
             return l.kind == LinkKind::MeasureFact && l.interval.covers(t);
         })) {
        if (store_.live_at(l->concept_id, t)) out.insert(l->concept_id);
    }
    return out;
}

std::set<std::string> Repository::actions_targeting(const std::string& concept_id, Date t) const {
    std::set<std::string> out = store_.traverse(concept_id, AssociationKind::ActionConcept, Direction::reverse, t);
    std::set<std::string> linked_dims;
    std::set<std::pair<std::string, std::string>> linked_rows;
    for (const CrossLink* l : links_where(bucket(links_by_concept_, concept_id),
                                          [&](const CrossLink& l) { return l.interval.covers(t); })) {
        if (l->kind == LinkKind::ConceptDimension) linked_dims.insert(l->target.dimension);
        if (l->kind == LinkKind::ConceptDimRow) linked_rows.emplace(l->target.dimension, l->target.key);
    }
    for (const auto& [link_id, chain] : links_) {
        for (const CrossLink& l : chain) {
            if (l.kind != LinkKind::ActionDimRow || !l.interval.covers(t)) continue;
            const bool hit =
                linked_dims.count(l.target.dimension) || linked_rows.count({l.target.dimension, l.target.key});
            if (hit && store_.live_at(l.concept_id, t)) out.insert(l.concept_id);
        }
    }
    return out;
}

EvaluationRecord Repository::record_evaluation(const EvaluationInput& input) {
    if (!input.goal_id) throw BadRequest("an evaluation must attach to a goal");
    Repository staged = *this;
    EvaluationRecord rec;
    rec.evaluation_id = staged.store_.create_concept(ConceptKind::Evaluation, input.text,
                                                     input.provenance.value_or(""), {}, input.at);
    rec.association_ids.push_back(
        staged.store_.create_association(AssociationKind::EvalGoal, rec.evaluation_id, *input.goal_id, input.at));
    if (input.measure_id) {
        rec.association_ids.push_back(staged.store_.create_association(
            AssociationKind::EvalMeasure, rec.evaluation_id, *input.measure_id, input.at));
    }
    *this = std::move(staged);
    return rec;
}

ActionRecord Repository::record_action(const ActionInput& input) {
    Repository staged = *this;
    ActionRecord rec;
    rec.action_id = staged.store_.create_concept(ConceptKind::Action, input.text, "", {}, input.at);
    for (const auto& eval_id : input.evaluation_ids) {
        rec.association_ids.push_back(
            staged.store_.create_association(AssociationKind::ActionFromEval, eval_id, rec.action_id, input.at));
    }
    for (const auto& [dim, key] : input.targets) {
        rec.link_ids.push_back(staged.link(LinkKind::ActionDimRow, rec.action_id, LinkTarget::row(dim, key), input.at));
    }
    rec.free_standing = input.evaluation_ids.empty() && input.targets.empty();
    *this = std::move(staged);
    return rec;
}

Date Repository::max_known_date() const {
    std::optional<Date> best;
    auto see = [&](const ValidInterval& iv) {
        if (!best || *best < iv.from) best = iv.from;
        if (iv.to && *best < *iv.to) best = *iv.to;
    };
    for (const auto& [id, chain] : store_.concepts()) for (const auto& v : chain) see(v.interval);
    for (const auto& [id, chain] : store_.associations()) for (const auto& v : chain) see(v.interval);
    for (const auto& [id, chain] : links_) for (const auto& v : chain) see(v.interval);
    for (const auto& dim : warehouse_.dimension_names()) {
        for (const auto& [key, chain] : warehouse_.rows_of(dim)) for (const auto& v : chain) see(v.interval);
    }
    for (const auto& fact : warehouse_.fact_names()) {
        for (const auto& row : warehouse_.facts_of(fact)) {
            if (!best || *best < row.t) best = row.t;
        }
    }
    return best.value_or(Date{});
}

}  // namespace bizmeta

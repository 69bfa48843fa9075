#include "bizmeta/model.hpp"

#include <charconv>

namespace bizmeta {

namespace {

constexpr std::array<std::string_view, 10> kConceptKindNames = {
    "BusinessConcept", "Function", "ExternalEvent", "InternalEntity", "ExternalEntity",
    "Process",         "Goal",     "Measure",       "Evaluation",     "Action",
};

constexpr std::array<std::string_view, 16> kAssociationKindNames = {
    "SubEntity",     "SubProcess",     "SubGoal",        "PGoal",         "EGoal",        "EntityProcess",
    "GoalMeasure",   "EvalGoal",       "EvalMeasure",    "EvalConcept",   "ActionFromEval",
    "EvalFromAction", "ActionConcept", "EventImpacts",   "EventRelated",  "AttributeSpec",
};

}  // namespace

std::string_view to_string(ConceptKind kind) { return kConceptKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ConceptKind> parse_concept_kind(std::string_view name) {
    for (std::size_t i = 0; i < kConceptKindNames.size(); ++i) {
        if (kConceptKindNames[i] == name) return static_cast<ConceptKind>(i);
    }
    return std::nullopt;
}

std::string_view to_string(KindRole role) {
    switch (role) {
        case KindRole::AnyConcept: return "BusinessConcept";
        case KindRole::Entity: return "Entity";
        case KindRole::Process: return "Process";
        case KindRole::Goal: return "Goal";
        case KindRole::Measure: return "Measure";
        case KindRole::Evaluation: return "Evaluation";
        case KindRole::Action: return "Action";
        case KindRole::ExternalEvent: return "ExternalEvent";
    }
    return "BusinessConcept";
}

bool is_entity(ConceptKind kind) {
    return kind == ConceptKind::InternalEntity || kind == ConceptKind::ExternalEntity;
}

bool admits(KindRole role, ConceptKind kind) {
    switch (role) {
        case KindRole::AnyConcept: return true;
        case KindRole::Entity: return is_entity(kind);
        case KindRole::Process: return kind == ConceptKind::Process;
        case KindRole::Goal: return kind == ConceptKind::Goal;
        case KindRole::Measure: return kind == ConceptKind::Measure;
        case KindRole::Evaluation: return kind == ConceptKind::Evaluation;
        case KindRole::Action: return kind == ConceptKind::Action;
        case KindRole::ExternalEvent: return kind == ConceptKind::ExternalEvent;
    }
    return false;
}

std::string_view to_string(AssociationKind kind) {
    return kAssociationKindNames[static_cast<std::size_t>(kind)];
}

std::optional<AssociationKind> parse_association_kind(std::string_view name) {
    for (std::size_t i = 0; i < kAssociationKindNames.size(); ++i) {
        if (kAssociationKindNames[i] == name) return static_cast<AssociationKind>(i);
    }
    return std::nullopt;
}

EndpointConstraint endpoint_constraint(AssociationKind kind) {
    using R = KindRole;
    switch (kind) {
        case AssociationKind::SubEntity: return {R::Entity, R::Entity};
        case AssociationKind::SubProcess: return {R::Process, R::Process};
        case AssociationKind::SubGoal: return {R::Goal, R::Goal};
        case AssociationKind::PGoal: return {R::Process, R::Goal};
        case AssociationKind::EGoal: return {R::Entity, R::Goal};
        case AssociationKind::EntityProcess: return {R::Entity, R::Process};
        case AssociationKind::GoalMeasure: return {R::Goal, R::Measure};
        case AssociationKind::EvalGoal: return {R::Evaluation, R::Goal};
        case AssociationKind::EvalMeasure: return {R::Evaluation, R::Measure};
        case AssociationKind::EvalConcept: return {R::Evaluation, R::AnyConcept};
        case AssociationKind::ActionFromEval: return {R::Evaluation, R::Action};
        case AssociationKind::EvalFromAction: return {R::Action, R::Evaluation};
        case AssociationKind::ActionConcept: return {R::Action, R::AnyConcept};
        case AssociationKind::EventImpacts: return {R::ExternalEvent, R::AnyConcept};
        case AssociationKind::EventRelated: return {R::ExternalEvent, R::ExternalEvent};
        case AssociationKind::AttributeSpec: return {R::Entity, R::AnyConcept};
    }
    return {R::AnyConcept, R::AnyConcept};
}

std::string_view to_string(Direction dir) { return dir == Direction::forward ? "forward" : "reverse"; }

std::string scalar_to_text(const Scalar& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* d = std::get_if<Date>(&value)) return d->to_string();
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, std::get<double>(value));
    return std::string(buf, res.ptr);
}

int compare_scalars(const Scalar& a, const Scalar& b) {
    auto rank = [](const Scalar& s) {
        if (std::holds_alternative<double>(s)) return 0;
        if (std::holds_alternative<Date>(s)) return 1;
        return 2;
    };
    if (rank(a) != rank(b)) return rank(a) < rank(b) ? -1 : 1;
    if (const auto* x = std::get_if<double>(&a)) {
        const double y = std::get<double>(b);
        return *x < y ? -1 : (y < *x ? 1 : 0);
    }
    if (const auto* x = std::get_if<Date>(&a)) {
        const Date y = std::get<Date>(b);
        return *x < y ? -1 : (y < *x ? 1 : 0);
    }
    const int c = std::get<std::string>(a).compare(std::get<std::string>(b));
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

std::vector<std::string> validate_concept(const ConceptVersion& candidate) {
    std::vector<std::string> out;
    if (candidate.logical_id.empty()) out.emplace_back("logical_id must not be empty");
    if (candidate.version_no < 1) out.emplace_back("version_no must be positive");
    if (candidate.name.empty()) out.emplace_back("name must not be empty");
    if (!candidate.interval.well_formed()) out.emplace_back("from < to");
    if (!candidate.attributes.empty() && !is_entity(candidate.kind)) {
        out.emplace_back("attributes restricted to Entity kinds");
    }
    return out;
}

std::vector<std::string> validate_association(const AssociationVersion& candidate, ConceptKind src_kind,
                                              ConceptKind dst_kind) {
    std::vector<std::string> out;
    const EndpointConstraint c = endpoint_constraint(candidate.kind);
    const std::string kind_name(to_string(candidate.kind));
    if (!admits(c.source, src_kind)) {
        out.push_back(kind_name + " source must be " + std::string(to_string(c.source)) + ", got " +
                      std::string(to_string(src_kind)));
    }
    if (!admits(c.target, dst_kind)) {
        out.push_back(kind_name + " target must be " + std::string(to_string(c.target)) + ", got " +
                      std::string(to_string(dst_kind)));
    }
    if (!candidate.interval.well_formed()) out.emplace_back("from < to");
    return out;
}

}  // namespace bizmeta

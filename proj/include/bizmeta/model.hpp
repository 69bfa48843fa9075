#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bizmeta/date.hpp"

namespace bizmeta {

// Business-metadata categories. Every kind except BusinessConcept specializes
// BusinessConcept; InternalEntity and ExternalEntity both play the Entity role.
enum class ConceptKind {
    BusinessConcept,
    Function,
    ExternalEvent,
    InternalEntity,
    ExternalEntity,
    Process,
    Goal,
    Measure,
    Evaluation,
    Action,
};

inline constexpr std::array<ConceptKind, 10> kAllConceptKinds = {
    ConceptKind::BusinessConcept, ConceptKind::Function, ConceptKind::ExternalEvent,
    ConceptKind::InternalEntity,  ConceptKind::ExternalEntity, ConceptKind::Process,
    ConceptKind::Goal,            ConceptKind::Measure, ConceptKind::Evaluation,
    ConceptKind::Action,
};

std::string_view to_string(ConceptKind kind);
std::optional<ConceptKind> parse_concept_kind(std::string_view name);

// What an association endpoint accepts.
enum class KindRole { AnyConcept, Entity, Process, Goal, Measure, Evaluation, Action, ExternalEvent };

std::string_view to_string(KindRole role);
bool is_entity(ConceptKind kind);
bool admits(KindRole role, ConceptKind kind);

enum class AssociationKind {
    SubEntity,
    SubProcess,
    SubGoal,
    PGoal,
    EGoal,
    EntityProcess,
    GoalMeasure,
    EvalGoal,
    EvalMeasure,
    EvalConcept,
    ActionFromEval,
    EvalFromAction,
    ActionConcept,
    EventImpacts,
    EventRelated,
    AttributeSpec,
};

inline constexpr std::array<AssociationKind, 16> kAllAssociationKinds = {
    AssociationKind::SubEntity,     AssociationKind::SubProcess,     AssociationKind::SubGoal,
    AssociationKind::PGoal,         AssociationKind::EGoal,          AssociationKind::EntityProcess,
    AssociationKind::GoalMeasure,   AssociationKind::EvalGoal,       AssociationKind::EvalMeasure,
    AssociationKind::EvalConcept,   AssociationKind::ActionFromEval, AssociationKind::EvalFromAction,
    AssociationKind::ActionConcept, AssociationKind::EventImpacts,   AssociationKind::EventRelated,
    AssociationKind::AttributeSpec,
};

std::string_view to_string(AssociationKind kind);
std::optional<AssociationKind> parse_association_kind(std::string_view name);

struct EndpointConstraint {
    KindRole source;
    KindRole target;
};

EndpointConstraint endpoint_constraint(AssociationKind kind);

enum class Direction { forward, reverse };

std::string_view to_string(Direction dir);

// Attribute values are text, number or date.
using Scalar = std::variant<std::string, double, Date>;
using Attributes = std::map<std::string, Scalar>;

std::string scalar_to_text(const Scalar& value);
// Total order used for deterministic sorting: number < date < text, then by value.
int compare_scalars(const Scalar& a, const Scalar& b);

struct ConceptVersion {
    std::string logical_id;
    int version_no = 1;
    ConceptKind kind = ConceptKind::BusinessConcept;
    std::string name;
    std::string description;
    Attributes attributes;
    ValidInterval interval;

    bool operator==(const ConceptVersion&) const = default;
};

struct AssociationVersion {
    std::string assoc_id;
    int version_no = 1;
    AssociationKind kind = AssociationKind::SubEntity;
    std::string src;
    std::string dst;
    ValidInterval interval;

    bool operator==(const AssociationVersion&) const = default;
};

// Structural checks on a single version. Violations are returned, never thrown.
std::vector<std::string> validate_concept(const ConceptVersion& candidate);

std::vector<std::string> validate_association(const AssociationVersion& candidate, ConceptKind src_kind,
                                              ConceptKind dst_kind);

// Version chain algebra shared by concepts, associations, dimension rows and
// cross links: version numbers 1..n, intervals well formed, disjoint, ordered
// by `from`, and only the last may be open.
template <typename Version, typename IntervalOf>
std::vector<std::string> validate_chain(const std::vector<Version>& chain, IntervalOf interval_of) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const ValidInterval& iv = interval_of(chain[i]);
        if (!iv.well_formed()) out.push_back("version " + std::to_string(i + 1) + ": from < to");
        if (i + 1 < chain.size()) {
            const ValidInterval& next = interval_of(chain[i + 1]);
            if (iv.is_open()) out.push_back("version " + std::to_string(i + 1) + ": open interval is not last");
            else if (next.from < *iv.to) out.push_back("version " + std::to_string(i + 2) + ": overlaps predecessor");
        }
    }
    return out;
}

}  // namespace bizmeta

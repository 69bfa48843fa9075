#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bizmeta/date.hpp"
#include "bizmeta/model.hpp"

namespace bizmeta {

// Fields an update may change. Unset fields carry over from the latest version;
// `attributes` replaces the whole attribute map when present.
struct ConceptChanges {
    std::optional<std::string> name;
    std::optional<std::string> description;
    std::optional<Attributes> attributes;
};

// True when `id` is usable as a logical/association/link identifier:
// non-empty, ASCII letters, digits, '_' and '-'.
bool is_valid_identifier(std::string_view id);

// Append-only valid-time store for business-metadata concepts and their
// associations. Versions are never rewritten; an update closes the open tail
// of a chain and appends a successor. The store is a value type: copying it
// yields an independent snapshot.
class MetadataStore {
public:
    using ConceptChain = std::vector<ConceptVersion>;
    using AssociationChain = std::vector<AssociationVersion>;

    std::string create_concept(ConceptKind kind, std::string name, std::string description, Attributes attributes,
                               Date from, std::optional<std::string> requested_id = std::nullopt);
    int update_concept(const std::string& id, const ConceptChanges& changes, Date effective_from);
    void retire_concept(const std::string& id, Date at);

    std::optional<ConceptVersion> get_as_of(const std::string& id, Date t) const;
    // Latest version whose interval intersects `window`.
    std::optional<ConceptVersion> get_during(const std::string& id, const ValidInterval& window) const;
    const ConceptChain& get_history(const std::string& id) const;

    bool contains(const std::string& id) const { return concepts_.count(id) != 0; }
    ConceptKind kind_of(const std::string& id) const;
    bool live_at(const std::string& id, Date t) const;
    bool live_during(const std::string& id, const ValidInterval& window) const;

    std::string create_association(AssociationKind kind, const std::string& src, const std::string& dst, Date from,
                                   std::optional<std::string> requested_id = std::nullopt);
    void end_association(const std::string& assoc_id, Date at);
    const AssociationChain& association_history(const std::string& assoc_id) const;
    bool contains_association(const std::string& assoc_id) const { return associations_.count(assoc_id) != 0; }

    std::set<std::string> traverse(const std::string& id, AssociationKind kind, Direction dir, Date t) const;
    std::set<std::string> traverse_during(const std::string& id, AssociationKind kind, Direction dir,
                                          const ValidInterval& window) const;

    const std::map<std::string, ConceptChain>& concepts() const { return concepts_; }
    const std::map<std::string, AssociationChain>& associations() const { return associations_; }
    const std::set<std::string>& ids_of_kind(ConceptKind kind) const;

    // Bulk insertion of a complete chain (import path). Validates chain algebra,
    // per-version structure and, for associations, endpoint kinds.
    void insert_concept_chain(ConceptChain chain);
    void insert_association_chain(AssociationChain chain);

    std::uint64_t next_concept_seq() const { return next_concept_seq_; }
    std::uint64_t next_assoc_seq() const { return next_assoc_seq_; }
    void bump_sequences(std::uint64_t concept_seq, std::uint64_t assoc_seq);

    bool operator==(const MetadataStore& other) const {
        return concepts_ == other.concepts_ && associations_ == other.associations_ &&
               next_concept_seq_ == other.next_concept_seq_ && next_assoc_seq_ == other.next_assoc_seq_;
    }

private:
    using IncidenceKey = std::pair<AssociationKind, Direction>;

    ConceptChain& chain_of(const std::string& id);
    std::string fresh_id(char prefix, std::uint64_t& seq, const std::optional<std::string>& requested,
                         bool taken_in_concepts) const;
    void index_association(const AssociationVersion& v);

    template <typename Admit>
    std::set<std::string> collect(const std::string& id, AssociationKind kind, Direction dir, Admit admit) const;

    std::map<std::string, ConceptChain> concepts_;
    std::map<std::string, AssociationChain> associations_;
    std::map<ConceptKind, std::set<std::string>> by_kind_;
    std::map<std::string, std::map<IncidenceKey, std::vector<std::string>>> incident_;
    std::uint64_t next_concept_seq_ = 1;
    std::uint64_t next_assoc_seq_ = 1;
};

}  // namespace bizmeta

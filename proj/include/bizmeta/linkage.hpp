#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bizmeta/store.hpp"
#include "bizmeta/warehouse.hpp"

namespace bizmeta {

// Links between business metadata and the warehouse segment.
enum class LinkKind {
    ConceptDimension,  // concept -> dimension
    ConceptDimRow,     // concept -> (dimension, key)
    MeasureFact,       // Measure -> (fact, measure column)
    ActionDimRow,      // Action -> (dimension, key) targeted by the action
};

std::string_view to_string(LinkKind kind);
std::optional<LinkKind> parse_link_kind(std::string_view name);

// Only the fields relevant to the link kind are set; the rest stay empty.
struct LinkTarget {
    std::string dimension;
    std::string key;
    std::string fact;
    std::string column;

    static LinkTarget dimension_of(std::string dim) { return {std::move(dim), {}, {}, {}}; }
    static LinkTarget row(std::string dim, std::string key) { return {std::move(dim), std::move(key), {}, {}}; }
    static LinkTarget fact_column(std::string fact, std::string column) {
        return {{}, {}, std::move(fact), std::move(column)};
    }

    bool operator==(const LinkTarget&) const = default;
};

struct CrossLink {
    std::string link_id;
    int version_no = 1;
    LinkKind kind = LinkKind::ConceptDimension;
    std::string concept_id;
    LinkTarget target;
    ValidInterval interval;

    bool operator==(const CrossLink&) const = default;
};

// ---------------------------------------------------------------------------
// Navigation dispatch table. Each traversal method follows one association
// kind in a fixed direction, chosen by the kind of the source concept.

struct DispatchEntry {
    AssociationKind association;
    Direction direction;
};

// Traversal methods in menu order.
const std::vector<std::string>& traversal_method_names();
bool is_traversal_method(std::string_view method);

std::optional<DispatchEntry> dispatch(std::string_view method, ConceptKind source);

// Traversal methods applicable to `kind`, in menu order.
std::vector<std::string> traversal_methods_for(ConceptKind kind);
// Full per-instance menu: traversal methods plus getDimension/getFacts/history where applicable.
std::vector<std::string> menu_for(ConceptKind kind);

// Kinds a traversal may yield from a source of kind `source`.
std::set<ConceptKind> result_kinds(std::string_view method, ConceptKind source);

struct DimensionView {
    std::string dimension;
    std::vector<DimensionRowVersion> rows;
};

struct FactRef {
    std::string fact;
    std::string column;

    bool operator==(const FactRef&) const = default;
};

struct EvaluationInput {
    std::optional<std::string> goal_id;
    std::optional<std::string> measure_id;
    std::string text;
    Date at;
    std::optional<std::string> provenance;
};

struct EvaluationRecord {
    std::string evaluation_id;
    std::vector<std::string> association_ids;
};

struct ActionInput {
    std::vector<std::string> evaluation_ids;
    std::string text;
    std::vector<std::pair<std::string, std::string>> targets;  // (dimension, key)
    Date at;
};

struct ActionRecord {
    std::string action_id;
    std::vector<std::string> association_ids;
    std::vector<std::string> link_ids;
    bool free_standing = false;  // no evaluations and no targets
};

// The integrated repository: metadata store, warehouse and the cross links
// between them. A value type; copies are independent snapshots.
class Repository {
public:
    using LinkChain = std::vector<CrossLink>;

    MetadataStore& store() { return store_; }
    const MetadataStore& store() const { return store_; }
    Warehouse& warehouse() { return warehouse_; }
    const Warehouse& warehouse() const { return warehouse_; }

    std::string link(LinkKind kind, const std::string& concept_id, const LinkTarget& target, Date from,
                     std::optional<std::string> requested_id = std::nullopt);
    void end_link(const std::string& link_id, Date at);
    const LinkChain& link_history(const std::string& link_id) const;
    const std::map<std::string, LinkChain>& links() const { return links_; }

    std::set<std::string> navigate(const std::string& id, std::string_view method, Date t) const;
    std::set<std::string> navigate_during(const std::string& id, std::string_view method,
                                          const ValidInterval& window) const;

    DimensionView get_dimension(const std::string& concept_id, Date t) const;
    FactRef get_facts(const std::string& measure_id, Date t) const;
    FactRef get_facts_during(const std::string& measure_id, const ValidInterval& window) const;

    // Data -> metadata.
    std::set<std::string> row_to_concepts(const std::string& dimension, const std::string& key, Date t) const;
    std::set<std::string> fact_to_measures(const std::string& fact, Date t) const;
    // Actions related to a concept either through ActionConcept associations or
    // through ActionDimRow targets on rows the concept is linked to.
    std::set<std::string> actions_targeting(const std::string& concept_id, Date t) const;

    // Each of these is all-or-nothing: on error the repository is unchanged.
    EvaluationRecord record_evaluation(const EvaluationInput& input);
    ActionRecord record_action(const ActionInput& input);

    // Latest bounded date mentioned anywhere (interval bounds and fact times);
    // the default "now" when a caller supplies none.
    Date max_known_date() const;

    void insert_link_chain(LinkChain chain);
    std::uint64_t next_link_seq() const { return next_link_seq_; }
    void bump_link_sequence(std::uint64_t seq) { next_link_seq_ = std::max(next_link_seq_, seq); }

    bool operator==(const Repository& other) const {
        return store_ == other.store_ && warehouse_ == other.warehouse_ && links_ == other.links_ &&
               next_link_seq_ == other.next_link_seq_;
    }

private:
    std::vector<std::string> validate_link(const CrossLink& link) const;
    void index_link(const CrossLink& link);
    DispatchEntry resolve_method(const std::string& id, std::string_view method) const;

    template <typename Admit>
    std::vector<const CrossLink*> links_where(const std::vector<std::string>& ids, Admit admit) const;

    MetadataStore store_;
    Warehouse warehouse_;
    std::map<std::string, LinkChain> links_;
    std::map<std::string, std::vector<std::string>> links_by_concept_;
    std::map<std::string, std::vector<std::string>> links_by_dimension_;
    std::map<std::string, std::vector<std::string>> links_by_fact_;
    std::uint64_t next_link_seq_ = 1;
};

}  // namespace bizmeta

#include "bizmeta/store.hpp"

#include <algorithm>

#include "bizmeta/error.hpp"

namespace bizmeta {

bool is_valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
}

std::string MetadataStore::fresh_id(char prefix, std::uint64_t& seq, const std::optional<std::string>& requested,
                                    bool concept_space) const {
    auto taken = [&](const std::string& id) {
        return concept_space ? concepts_.count(id) != 0 : associations_.count(id) != 0;
    };
    if (requested) {
        if (!is_valid_identifier(*requested)) throw BadRequest("invalid identifier '" + *requested + "'");
        if (taken(*requested)) throw Conflict("identifier '" + *requested + "' already exists");
        return *requested;
    }
    std::string id;
    do {
        id = prefix + std::to_string(seq++);
    } while (taken(id));
    return id;
}

MetadataStore::ConceptChain& MetadataStore::chain_of(const std::string& id) {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) throw NotFound("unknown concept '" + id + "'");
    return it->second;
}

std::string MetadataStore::create_concept(ConceptKind kind, std::string name, std::string description,
                                          Attributes attributes, Date from, std::optional<std::string> requested_id) {
    ConceptVersion v;
    v.version_no = 1;
    v.kind = kind;
    v.name = std::move(name);
    v.description = std::move(description);
    v.attributes = std::move(attributes);
    v.interval = ValidInterval::open_from(from);
    v.logical_id = requested_id.value_or("pending");
    if (auto violations = validate_concept(v); !violations.empty()) {
        throw ValidationError("invalid concept", std::move(violations));
    }
    std::uint64_t seq = next_concept_seq_;
    v.logical_id = fresh_id('c', seq, requested_id, true);
    next_concept_seq_ = seq;
    by_kind_[kind].insert(v.logical_id);
    std::string id = v.logical_id;
    concepts_.emplace(id, ConceptChain{std::move(v)});
    return id;
}

int MetadataStore::update_concept(const std::string& id, const ConceptChanges& changes, Date effective_from) {
    ConceptChain& chain = chain_of(id);
    ConceptVersion& latest = chain.back();
    if (!latest.interval.is_open()) throw Conflict("object retired: '" + id + "'");
    if (!(latest.interval.from < effective_from)) {
        throw Conflict("retroactive update rejected: effective_from " + effective_from.to_string() +
                       " is not after latest from " + latest.interval.from.to_string());
    }
    ConceptVersion next = latest;
    next.version_no = latest.version_no + 1;
    if (changes.name) next.name = *changes.name;
    if (changes.description) next.description = *changes.description;
    if (changes.attributes) next.attributes = *changes.attributes;
    next.interval = ValidInterval::open_from(effective_from);
    if (auto violations = validate_concept(next); !violations.empty()) {
        throw ValidationError("invalid concept update", std::move(violations));
    }
    latest.interval.to = effective_from;
    chain.push_back(std::move(next));
    return chain.back().version_no;
}

void MetadataStore::retire_concept(const std::string& id, Date at) {
    ConceptChain& chain = chain_of(id);
    ConceptVersion& latest = chain.back();
    if (!latest.interval.is_open()) throw Conflict("object retired: '" + id + "'");
    if (!(latest.interval.from < at)) {
        throw Conflict("retire date " + at.to_string() + " is not after latest from " +
                       latest.interval.from.to_string());
    }
    latest.interval.to = at;
}

std::optional<ConceptVersion> MetadataStore::get_as_of(const std::string& id, Date t) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) return std::nullopt;
    const ConceptChain& chain = it->second;
    // Chains are ordered by `from`: the candidate is the last version starting at or before t.
    auto pos = std::upper_bound(chain.begin(), chain.end(), t,
                                [](Date d, const ConceptVersion& v) { return d < v.interval.from; });
    if (pos == chain.begin()) return std::nullopt;
    --pos;
    if (!pos->interval.covers(t)) return std::nullopt;
    return *pos;
}

std::optional<ConceptVersion> MetadataStore::get_during(const std::string& id, const ValidInterval& window) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) return std::nullopt;
    for (auto v = it->second.rbegin(); v != it->second.rend(); ++v) {
        if (v->interval.overlaps(window)) return *v;
    }
    return std::nullopt;
}

const MetadataStore::ConceptChain& MetadataStore::get_history(const std::string& id) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) throw NotFound("unknown concept '" + id + "'");
    return it->second;
}

ConceptKind MetadataStore::kind_of(const std::string& id) const { return get_history(id).front().kind; }

bool MetadataStore::live_at(const std::string& id, Date t) const { return get_as_of(id, t).has_value(); }

bool MetadataStore::live_during(const std::string& id, const ValidInterval& window) const {
    auto it = concepts_.find(id);
    if (it == concepts_.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [&](const ConceptVersion& v) { return v.interval.overlaps(window); });
}

void MetadataStore::index_association(const AssociationVersion& v) {
    auto push_unique = [](std::vector<std::string>& ids, const std::string& id) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    };
    push_unique(incident_[v.src][{v.kind, Direction::forward}], v.assoc_id);
    push_unique(incident_[v.dst][{v.kind, Direction::reverse}], v.assoc_id);
}

std::string MetadataStore::create_association(AssociationKind kind, const std::string& src, const std::string& dst,
                                              Date from, std::optional<std::string> requested_id) {
    const ConceptKind src_kind = kind_of(src);
    const ConceptKind dst_kind = kind_of(dst);
    AssociationVersion v;
    v.kind = kind;
    v.src = src;
    v.dst = dst;
    v.interval = ValidInterval::open_from(from);
    if (auto violations = validate_association(v, src_kind, dst_kind); !violations.empty()) {
        throw ValidationError("invalid association", std::move(violations));
    }
    std::uint64_t seq = next_assoc_seq_;
    v.assoc_id = fresh_id('a', seq, requested_id, false);
    next_assoc_seq_ = seq;
    index_association(v);
    std::string id = v.assoc_id;
    associations_.emplace(id, AssociationChain{std::move(v)});
    return id;
}

void MetadataStore::end_association(const std::string& assoc_id, Date at) {
    auto it = associations_.find(assoc_id);
    if (it == associations_.end()) throw NotFound("unknown association '" + assoc_id + "'");
    AssociationVersion& latest = it->second.back();
    if (!latest.interval.is_open()) throw Conflict("association already ended: '" + assoc_id + "'");
    if (!(latest.interval.from < at)) {
        throw Conflict("end date " + at.to_string() + " is not after from " + latest.interval.from.to_string());
    }
    latest.interval.to = at;
}

const MetadataStore::AssociationChain& MetadataStore::association_history(const std::string& assoc_id) const {
    auto it = associations_.find(assoc_id);
    if (it == associations_.end()) throw NotFound("unknown association '" + assoc_id + "'");
    return it->second;
}

template <typename Admit>
std::set<std::string> MetadataStore::collect(const std::string& id, AssociationKind kind, Direction dir,
                                             Admit admit) const {
    if (!contains(id)) throw NotFound("unknown concept '" + id + "'");
    std::set<std::string> out;
    auto node = incident_.find(id);
    if (node == incident_.end()) return out;
    auto bucket = node->second.find({kind, dir});
    if (bucket == node->second.end()) return out;
    for (const std::string& assoc_id : bucket->second) {
        for (const AssociationVersion& v : associations_.at(assoc_id)) {
            const std::string& far = dir == Direction::forward ? v.dst : v.src;
            if (admit(v.interval, far)) {
                out.insert(far);
                break;
            }
        }
    }
    return out;
}

std::set<std::string> MetadataStore::traverse(const std::string& id, AssociationKind kind, Direction dir,
                                              Date t) const {
    return collect(id, kind, dir, [&](const ValidInterval& iv, const std::string& far) {
        return iv.covers(t) && live_at(far, t);
    });
}

std::set<std::string> MetadataStore::traverse_during(const std::string& id, AssociationKind kind, Direction dir,
                                                     const ValidInterval& window) const {
    return collect(id, kind, dir, [&](const ValidInterval& iv, const std::string& far) {
        return iv.overlaps(window) && live_during(far, window);
    });
}

const std::set<std::string>& MetadataStore::ids_of_kind(ConceptKind kind) const {
    static const std::set<std::string> empty;
    auto it = by_kind_.find(kind);
    return it == by_kind_.end() ? empty : it->second;
}

void MetadataStore::insert_concept_chain(ConceptChain chain) {
    if (chain.empty()) throw BadRequest("empty concept chain");
    const std::string id = chain.front().logical_id;
    if (!is_valid_identifier(id)) throw BadRequest("invalid identifier '" + id + "'");
    if (contains(id)) throw Conflict("identifier '" + id + "' already exists");
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const ConceptVersion& v = chain[i];
        if (v.logical_id != id) violations.push_back("mixed logical ids in chain");
        if (v.version_no != static_cast<int>(i + 1)) violations.push_back("version_no must be consecutive from 1");
        if (v.kind != chain.front().kind) violations.push_back("kind changes between versions");
        for (auto& msg : validate_concept(v)) violations.push_back(std::move(msg));
    }
    for (auto& msg : validate_chain(chain, [](const ConceptVersion& v) -> const ValidInterval& { return v.interval; })) {
        violations.push_back(std::move(msg));
    }
    if (!violations.empty()) throw ValidationError("invalid concept chain '" + id + "'", std::move(violations));
    by_kind_[chain.front().kind].insert(id);
    concepts_.emplace(id, std::move(chain));
}

void MetadataStore::insert_association_chain(AssociationChain chain) {
    if (chain.empty()) throw BadRequest("empty association chain");
    const std::string id = chain.front().assoc_id;
    if (!is_valid_identifier(id)) throw BadRequest("invalid identifier '" + id + "'");
    if (contains_association(id)) throw Conflict("identifier '" + id + "' already exists");
    std::vector<std::string> violations;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const AssociationVersion& v = chain[i];
        if (v.assoc_id != id) violations.push_back("mixed association ids in chain");
        if (v.version_no != static_cast<int>(i + 1)) violations.push_back("version_no must be consecutive from 1");
        if (v.kind != chain.front().kind || v.src != chain.front().src || v.dst != chain.front().dst) {
            violations.push_back("kind or endpoints change between versions");
        }
        for (auto& msg : validate_association(v, kind_of(v.src), kind_of(v.dst))) violations.push_back(std::move(msg));
    }
    for (auto& msg :
         validate_chain(chain, [](const AssociationVersion& v) -> const ValidInterval& { return v.interval; })) {
        violations.push_back(std::move(msg));
    }
    if (!violations.empty()) throw ValidationError("invalid association chain '" + id + "'", std::move(violations));
    index_association(chain.front());
    associations_.emplace(id, std::move(chain));
}

void MetadataStore::bump_sequences(std::uint64_t concept_seq, std::uint64_t assoc_seq) {
    next_concept_seq_ = std::max(next_concept_seq_, concept_seq);
    next_assoc_seq_ = std::max(next_assoc_seq_, assoc_seq);
}

}  // namespace bizmeta

#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "prefdyn/aggregation.hpp"
#include "prefdyn/graph.hpp"
#include "prefdyn/preorder.hpp"

namespace prefdyn {

/// Per-agent behavior: how it speaks, how large a coalition of neighbors it
/// requires before adopting a comparison, and how it folds the aggregate
/// into its own preference.
struct AgentSpec {
    MessageFn message = MessageFn::Identity;
    int threshold = 1;  // coalition size r for the median aggregation
    UpdateFn update = UpdateFn::Join;
};

/// One preference relation per agent: the global state of the dynamics.
/// All relations share one dimension. Compared entrywise (product order).
class PreferenceProfile {
public:
    explicit PreferenceProfile(std::vector<PreferenceRelation> relations)
        : relations_(std::move(relations)) {
        if (relations_.empty()) throw std::invalid_argument("PreferenceProfile: empty");
        for (const auto& p : relations_)
            if (p.dim() != relations_.front().dim())
                throw std::invalid_argument("PreferenceProfile: mixed dimensions");
    }

    int size() const noexcept { return static_cast<int>(relations_.size()); }
    int dim() const noexcept { return relations_.front().dim(); }

    const PreferenceRelation& operator[](int i) const {
        return relations_.at(static_cast<std::size_t>(i));
    }

    const std::vector<PreferenceRelation>& relations() const noexcept { return relations_; }
    auto begin() const noexcept { return relations_.begin(); }
    auto end() const noexcept { return relations_.end(); }

    friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;

private:
    std::vector<PreferenceRelation> relations_;
};

inline InformationOrder compare(const PreferenceProfile& a, const PreferenceProfile& b) {
    if (a.size() != b.size()) throw std::invalid_argument("compare: profile size mismatch");
    bool le = true, ge = true;
    for (int i = 0; i < a.size(); ++i) {
        le = le && a[i].relation().subset_of(b[i].relation());
        ge = ge && b[i].relation().subset_of(a[i].relation());
        if (!le && !ge) return InformationOrder::Incomparable;
    }
    if (le && ge) return InformationOrder::Equal;
    return le ? InformationOrder::Less : InformationOrder::Greater;
}

inline bool leq(const PreferenceProfile& a, const PreferenceProfile& b) {
    if (a.size() != b.size()) throw std::invalid_argument("leq: profile size mismatch");
    for (int i = 0; i < a.size(); ++i)
        if (!a[i].relation().subset_of(b[i].relation())) return false;
    return true;
}

inline PreferenceProfile profile_join(const PreferenceProfile& a, const PreferenceProfile& b) {
    if (a.size() != b.size()) throw std::invalid_argument("profile_join: size mismatch");
    std::vector<PreferenceRelation> out;
    out.reserve(a.size());
    for (int i = 0; i < a.size(); ++i) out.push_back(join(a[i], b[i]));
    return PreferenceProfile(std::move(out));
}

inline PreferenceProfile profile_meet(const PreferenceProfile& a, const PreferenceProfile& b) {
    if (a.size() != b.size()) throw std::invalid_argument("profile_meet: size mismatch");
    std::vector<PreferenceRelation> out;
    out.reserve(a.size());
    for (int i = 0; i < a.size(); ++i) out.push_back(meet(a[i], b[i]));
    return PreferenceProfile(std::move(out));
}

/// A complete dynamics definition: who talks to whom, over which
/// alternatives, with which per-agent behavior. Construction checks that
/// every non-isolated agent's threshold fits within its degree.
class SystemSpec {
public:
    SystemSpec(Graph graph, AlternativeSet alternatives, std::vector<AgentSpec> agents)
        : graph_(std::move(graph)), alternatives_(alternatives), agents_(std::move(agents)) {
        if (static_cast<int>(agents_.size()) != graph_.agent_count())
            throw std::invalid_argument("SystemSpec: agent list length must equal graph size");
        for (int i = 0; i < graph_.agent_count(); ++i) {
            const int deg = graph_.degree(i);
            if (deg >= 1 && (agents_[i].threshold < 1 || agents_[i].threshold > deg))
                throw std::invalid_argument("SystemSpec: agent " + std::to_string(i) +
                                            " threshold " + std::to_string(agents_[i].threshold) +
                                            " outside [1, " + std::to_string(deg) + "]");
        }
    }

    const Graph& graph() const noexcept { return graph_; }
    const AlternativeSet& alternatives() const noexcept { return alternatives_; }
    int agent_count() const noexcept { return graph_.agent_count(); }

    const AgentSpec& agent(int i) const {
        if (i < 0 || i >= agent_count())
            throw std::out_of_range("SystemSpec: agent index out of range");
        return agents_[static_cast<std::size_t>(i)];
    }

private:
    Graph graph_;
    AlternativeSet alternatives_;
    std::vector<AgentSpec> agents_;
};

inline void check_profile(const SystemSpec& spec, const PreferenceProfile& profile) {
    if (profile.size() != spec.agent_count())
        throw std::invalid_argument("profile size does not match agent count");
    if (profile.dim() != spec.alternatives().size())
        throw std::invalid_argument("profile dimension does not match alternative count");
}

/// One agent's next preference: collect messages from neighbors in sorted
/// index order, aggregate them with the agent's median threshold, then apply
/// the agent's update rule. Isolated agents aggregate the empty message list
/// to the minimum, so Prior and Join leave them unchanged.
inline PreferenceRelation local_step(const SystemSpec& spec, const PreferenceProfile& profile,
                                     int i) {
    check_profile(spec, profile);
    const AgentSpec& self = spec.agent(i);
    const auto& nbrs = spec.graph().neighbors(i);
    if (nbrs.empty()) return apply_update(self.update, profile[i], bottom(spec.alternatives()));

    std::vector<PreferenceRelation> messages;
    messages.reserve(nbrs.size());
    for (int j : nbrs) messages.push_back(apply_message(spec.agent(j).message, profile[j], profile[i]));
    return apply_update(self.update, profile[i], median(self.threshold, messages));
}

/// Synchronous round: every agent steps against the same input profile.
inline PreferenceProfile global_step(const SystemSpec& spec, const PreferenceProfile& profile) {
    check_profile(spec, profile);
    std::vector<PreferenceRelation> next;
    next.reserve(profile.size());
    for (int i = 0; i < profile.size(); ++i) next.push_back(local_step(spec, profile, i));
    return PreferenceProfile(std::move(next));
}

/// Visited profiles, round by round; converged_at is the first t with
/// profiles[t+1] == profiles[t] (exact bit equality), when reached.
struct Trajectory {
    std::vector<PreferenceProfile> profiles;
    std::optional<int> converged_at;
};

/// Iterate the synchronous dynamics for at most t_max rounds, stopping
/// early at the first repeated profile. Non-convergence within the budget
/// is reported through converged_at, not as an error.
inline Trajectory run(const SystemSpec& spec, const PreferenceProfile& initial, int t_max) {
    if (t_max < 1) throw std::invalid_argument("run: t_max must be at least 1");
    Trajectory trajectory;
    trajectory.profiles.push_back(initial);
    for (int t = 0; t < t_max; ++t) {
        PreferenceProfile next = global_step(spec, trajectory.profiles.back());
        const bool fixed = next == trajectory.profiles.back();
        trajectory.profiles.push_back(std::move(next));
        if (fixed) {
            trajectory.converged_at = t;
            break;
        }
    }
    return trajectory;
}

inline bool is_fixed_point(const SystemSpec& spec, const PreferenceProfile& profile) {
    return global_step(spec, profile) == profile;
}

/// Text format: header "n |A|", then n relations in the canonical relation
/// format, separated by blank lines.
inline void write_profile(std::ostream& out, const PreferenceProfile& profile) {
    out << profile.size() << ' ' << profile.dim() << '\n';
    for (int i = 0; i < profile.size(); ++i) {
        if (i > 0) out << '\n';
        out << to_text(profile[i].relation());
    }
}

inline PreferenceProfile read_profile(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("read_profile: missing header");
    std::istringstream header(line);
    int n = 0, dim = 0;
    if (!(header >> n >> dim)) throw std::invalid_argument("read_profile: bad header");
    std::vector<PreferenceRelation> relations;
    relations.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) relations.emplace_back(read_relation(in, dim));
    return PreferenceProfile(std::move(relations));
}

}  // namespace prefdyn

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace confound {

using NodeSet = std::set<std::string>;
using Edge = std::pair<std::string, std::string>;  // parent -> child

enum class NodeKind { Endogenous, Exogenous };

struct NodeInfo {
    NodeKind kind = NodeKind::Endogenous;
    // Carries a derivative self-dependence (dynamic mechanism).
    bool dynamic = false;
    // The dynamic mechanism has a unique equilibrium for every parent value.
    bool uniquely_solvable = true;

    friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

/// Structure of a (dynamical) structural causal model: named nodes flagged
/// endogenous or exogenous, directed parent -> child edges, and a marker for
/// nodes whose mechanism still contains a time derivative.
///
/// Graphs are values. add_node/add_edge validate as they build; the
/// operations below return new graphs.
class CausalGraph {
public:
    CausalGraph& add_node(const std::string& name, NodeKind kind, bool dynamic = false,
                          bool uniquely_solvable = true);
    CausalGraph& add_edge(const std::string& parent, const std::string& child);
    CausalGraph& remove_edge(const std::string& parent, const std::string& child);
    CausalGraph& set_dynamic(const std::string& name, bool dynamic);

    [[nodiscard]] bool has_node(const std::string& name) const { return nodes_.contains(name); }
    [[nodiscard]] bool has_edge(const std::string& parent, const std::string& child) const {
        return edges_.contains({parent, child});
    }
    [[nodiscard]] const NodeInfo& info(const std::string& name) const;
    [[nodiscard]] bool is_exogenous(const std::string& name) const {
        return info(name).kind == NodeKind::Exogenous;
    }

    [[nodiscard]] const std::map<std::string, NodeInfo>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::set<Edge>& edges() const noexcept { return edges_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }

    [[nodiscard]] NodeSet parents(const std::string& name) const;
    [[nodiscard]] NodeSet children(const std::string& name) const;
    /// Strict descendants (the node itself is excluded unless on a cycle).
    [[nodiscard]] NodeSet descendants(const std::string& name) const;
    /// Strict ancestors.
    [[nodiscard]] NodeSet ancestors(const std::string& name) const;
    [[nodiscard]] NodeSet dynamic_nodes() const;

    friend bool operator==(const CausalGraph&, const CausalGraph&) = default;

private:
    void require(const std::string& name) const;

    std::map<std::string, NodeInfo> nodes_;
    std::set<Edge> edges_;
};

/// Equilibrated feedforward loop: y_r -> u <- w, u -> x <- w, x -> y.
CausalGraph build_mff();
/// Same structure before equilibration: x keeps its dynamic marker.
CausalGraph build_mff_sdcm();
/// Equilibrated feedback loop: y_r -> u <- y, u -> x <- w, x -> y.
CausalGraph build_mfb();

bool is_acyclic(const CausalGraph& g);

/// d-separation of A and B given Z by reachability over (node, direction)
/// pairs. Throws CyclicGraph, OverlappingSets or UnknownNode.
bool d_separated(const CausalGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& z);

struct AdjustmentReport {
    bool admissible = false;
    std::vector<std::vector<std::string>> violating_paths;
    std::vector<std::string> descendant_violations;
};

/// Backdoor criterion for treatment -> outcome with adjustment set z.
AdjustmentReport backdoor_admissible(const CausalGraph& g, const std::string& treatment,
                                     const std::string& outcome, const NodeSet& z);

/// All subsets of the candidate nodes that pass the backdoor criterion,
/// ordered by size then lexicographically. Candidates default to every node
/// other than treatment and outcome; at most 16 candidates.
std::vector<NodeSet> admissible_adjustment_sets(const CausalGraph& g, const std::string& treatment,
                                                const std::string& outcome,
                                                const NodeSet* candidates = nullptr);

/// Perfect intervention: cut every edge into the intervened nodes and drop
/// their dynamic markers. Throws ExogenousIntervention.
CausalGraph intervene(const CausalGraph& g, const NodeSet& targets);

/// Replaces every dynamic mechanism by its steady-state map: markers are
/// cleared, parent sets are kept. Throws NotUniquelySolvable.
CausalGraph equilibrate(const CausalGraph& g);

/// Rewrites a loop where `controlled` sits on a directed cycle into the
/// observationally equivalent feedforward form: the in-cycle parents of
/// `controlled` are replaced by the exogenous variables upstream of them.
/// Throws ShapeMismatch when `controlled` is not on a cycle.
CausalGraph feedback_to_feedforward_rewrite(const CausalGraph& g,
                                            const std::string& controlled = "u");

}  // namespace confound

#include "confound/graph.hpp"

#include "confound/error.hpp"

#include <algorithm>
#include <deque>

namespace confound {

CausalGraph& CausalGraph::add_node(const std::string& name, NodeKind kind, bool dynamic,
                                   bool uniquely_solvable) {
    if (name.empty()) throw Error(ErrorCode::InvalidArgument, "node name must be non-empty");
    if (nodes_.contains(name)) throw Error(ErrorCode::InvalidArgument, "duplicate node: " + name);
    if (dynamic && kind == NodeKind::Exogenous)
        throw Error(ErrorCode::InvalidArgument, "exogenous node cannot be dynamic: " + name);
    nodes_.emplace(name, NodeInfo{kind, dynamic, uniquely_solvable});
    return *this;
}

CausalGraph& CausalGraph::add_edge(const std::string& parent, const std::string& child) {
    require(parent);
    require(child);
    if (nodes_.at(child).kind == NodeKind::Exogenous)
        throw Error(ErrorCode::InvalidArgument, "exogenous node cannot have parents: " + child);
    if (parent == child)
        throw Error(ErrorCode::InvalidArgument,
                    "self-loops are encoded as dynamic markers, not edges: " + child);
    if (!edges_.emplace(parent, child).second)
        throw Error(ErrorCode::InvalidArgument, "duplicate edge: " + parent + " -> " + child);
    return *this;
}

CausalGraph& CausalGraph::remove_edge(const std::string& parent, const std::string& child) {
    edges_.erase({parent, child});
    return *this;
}

CausalGraph& CausalGraph::set_dynamic(const std::string& name, bool dynamic) {
    require(name);
    auto& node = nodes_.at(name);
    if (dynamic && node.kind == NodeKind::Exogenous)
        throw Error(ErrorCode::InvalidArgument, "exogenous node cannot be dynamic: " + name);
    node.dynamic = dynamic;
    return *this;
}

const NodeInfo& CausalGraph::info(const std::string& name) const {
    require(name);
    return nodes_.at(name);
}

void CausalGraph::require(const std::string& name) const {
    if (!nodes_.contains(name)) throw Error(ErrorCode::UnknownNode, "unknown node: " + name);
}

NodeSet CausalGraph::parents(const std::string& name) const {
    require(name);
    NodeSet out;
    for (const auto& [p, c] : edges_)
        if (c == name) out.insert(p);
    return out;
}

NodeSet CausalGraph::children(const std::string& name) const {
    require(name);
    NodeSet out;
    for (const auto& [p, c] : edges_)
        if (p == name) out.insert(c);
    return out;
}

NodeSet CausalGraph::descendants(const std::string& name) const {
    require(name);
    NodeSet seen;
    std::deque<std::string> queue{name};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        for (const auto& c : children(cur))
            if (seen.insert(c).second) queue.push_back(c);
    }
    return seen;
}

NodeSet CausalGraph::ancestors(const std::string& name) const {
    require(name);
    NodeSet seen;
    std::deque<std::string> queue{name};
    while (!queue.empty()) {
        const std::string cur = queue.front();
        queue.pop_front();
        for (const auto& p : parents(cur))
            if (seen.insert(p).second) queue.push_back(p);
    }
    return seen;
}

NodeSet CausalGraph::dynamic_nodes() const {
    NodeSet out;
    for (const auto& [name, info] : nodes_)
        if (info.dynamic) out.insert(name);
    return out;
}

CausalGraph build_mff() {
    CausalGraph g;
    g.add_node("y_r", NodeKind::Exogenous)
        .add_node("w", NodeKind::Exogenous)
        .add_node("u", NodeKind::Endogenous)
        .add_node("x", NodeKind::Endogenous)
        .add_node("y", NodeKind::Endogenous);
    g.add_edge("y_r", "u").add_edge("w", "u").add_edge("u", "x").add_edge("w", "x").add_edge("x", "y");
    return g;
}

CausalGraph build_mff_sdcm() {
    CausalGraph g = build_mff();
    g.set_dynamic("x", true);
    return g;
}

CausalGraph build_mfb() {
    CausalGraph g;
    g.add_node("y_r", NodeKind::Exogenous)
        .add_node("w", NodeKind::Exogenous)
        .add_node("u", NodeKind::Endogenous)
        .add_node("x", NodeKind::Endogenous)
        .add_node("y", NodeKind::Endogenous);
    g.add_edge("y_r", "u").add_edge("y", "u").add_edge("u", "x").add_edge("w", "x").add_edge("x", "y");
    return g;
}

bool is_acyclic(const CausalGraph& g) {
    std::map<std::string, std::size_t> indegree;
    for (const auto& [name, info] : g.nodes()) indegree[name] = 0;
    for (const auto& [p, c] : g.edges()) ++indegree[c];
    std::deque<std::string> ready;
    for (const auto& [name, d] : indegree)
        if (d == 0) ready.push_back(name);
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::string cur = ready.front();
        ready.pop_front();
        ++visited;
        for (const auto& [p, c] : g.edges())
            if (p == cur && --indegree[c] == 0) ready.push_back(c);
    }
    return visited == g.node_count();
}

namespace {

void require_nodes(const CausalGraph& g, const NodeSet& s) {
    for (const auto& n : s)
        if (!g.has_node(n)) throw Error(ErrorCode::UnknownNode, "unknown node: " + n);
}

bool disjoint(const NodeSet& a, const NodeSet& b) {
    return std::none_of(a.begin(), a.end(), [&](const auto& n) { return b.contains(n); });
}

NodeSet ancestors_inclusive(const CausalGraph& g, const NodeSet& z) {
    NodeSet out = z;
    for (const auto& n : z) out.merge(g.ancestors(n));
    return out;
}

// Nodes reachable from `sources` along active trails given z.
NodeSet reachable(const CausalGraph& g, const NodeSet& sources, const NodeSet& z) {
    const NodeSet anc = ancestors_inclusive(g, z);
    enum Dir { Up, Down };  // Up: arrived from a child; Down: arrived from a parent
    std::set<std::pair<std::string, Dir>> visited;
    std::deque<std::pair<std::string, Dir>> queue;
    for (const auto& s : sources) queue.emplace_back(s, Up);
    NodeSet out;
    while (!queue.empty()) {
        auto [node, dir] = queue.front();
        queue.pop_front();
        if (!visited.emplace(node, dir).second) continue;
        const bool observed = z.contains(node);
        if (!observed) out.insert(node);
        if (dir == Up && !observed) {
            for (const auto& p : g.parents(node)) queue.emplace_back(p, Up);
            for (const auto& c : g.children(node)) queue.emplace_back(c, Down);
        } else if (dir == Down) {
            if (!observed)
                for (const auto& c : g.children(node)) queue.emplace_back(c, Down);
            if (anc.contains(node))
                for (const auto& p : g.parents(node)) queue.emplace_back(p, Up);
        }
    }
    return out;
}

// Path-level blocking check along an explicit node sequence.
bool path_blocked(const CausalGraph& g, const std::vector<std::string>& path, const NodeSet& z) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
        const auto& prev = path[i - 1];
        const auto& mid = path[i];
        const auto& next = path[i + 1];
        const bool collider = g.has_edge(prev, mid) && g.has_edge(next, mid);
        if (collider) {
            const NodeSet desc = g.descendants(mid);
            const bool opened =
                z.contains(mid) ||
                std::any_of(desc.begin(), desc.end(), [&](const auto& d) { return z.contains(d); });
            if (!opened) return true;
        } else if (z.contains(mid)) {
            return true;
        }
    }
    return false;
}

void collect_backdoor_paths(const CausalGraph& g, const std::string& target,
                            std::vector<std::string>& path, NodeSet& on_path,
                            std::vector<std::vector<std::string>>& out) {
    const std::string cur = path.back();
    if (cur == target) {
        out.push_back(path);
        return;
    }
    NodeSet neighbours;
    if (path.size() == 1) {
        neighbours = g.parents(cur);  // first edge must point into the treatment
    } else {
        neighbours = g.parents(cur);
        neighbours.merge(g.children(cur));
    }
    for (const auto& n : neighbours) {
        if (on_path.contains(n)) continue;
        path.push_back(n);
        on_path.insert(n);
        collect_backdoor_paths(g, target, path, on_path, out);
        on_path.erase(n);
        path.pop_back();
    }
}

}  // namespace

bool d_separated(const CausalGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& z) {
    require_nodes(g, a);
    require_nodes(g, b);
    require_nodes(g, z);
    if (!disjoint(a, b) || !disjoint(a, z) || !disjoint(b, z))
        throw Error(ErrorCode::OverlappingSets, "A, B and Z must be disjoint");
    if (!is_acyclic(g)) throw Error(ErrorCode::CyclicGraph, "d-separation needs an acyclic graph");
    const NodeSet reach = reachable(g, a, z);
    return disjoint(reach, b);
}

AdjustmentReport backdoor_admissible(const CausalGraph& g, const std::string& treatment,
                                     const std::string& outcome, const NodeSet& z) {
    require_nodes(g, {treatment, outcome});
    require_nodes(g, z);
    if (treatment == outcome)
        throw Error(ErrorCode::InvalidArgument, "treatment and outcome must differ");
    if (z.contains(treatment) || z.contains(outcome))
        throw Error(ErrorCode::OverlappingSets, "adjustment set must exclude treatment and outcome");
    if (!is_acyclic(g)) throw Error(ErrorCode::CyclicGraph, "backdoor criterion needs an acyclic graph");

    AdjustmentReport report;
    const NodeSet desc = g.descendants(treatment);
    for (const auto& n : z)
        if (desc.contains(n)) report.descendant_violations.push_back(n);

    std::vector<std::vector<std::string>> paths;
    std::vector<std::string> path{treatment};
    NodeSet on_path{treatment};
    collect_backdoor_paths(g, outcome, path, on_path, paths);
    for (auto& p : paths)
        if (!path_blocked(g, p, z)) report.violating_paths.push_back(std::move(p));

    report.admissible = report.violating_paths.empty() && report.descendant_violations.empty();
    return report;
}

std::vector<NodeSet> admissible_adjustment_sets(const CausalGraph& g, const std::string& treatment,
                                                const std::string& outcome,
                                                const NodeSet* candidates) {
    NodeSet pool;
    if (candidates) {
        require_nodes(g, *candidates);
        pool = *candidates;
    } else {
        for (const auto& [name, info] : g.nodes()) pool.insert(name);
    }
    pool.erase(treatment);
    pool.erase(outcome);
    if (pool.size() > 16)
        throw Error(ErrorCode::InvalidArgument, "subset enumeration limited to 16 candidates");
    const std::vector<std::string> items(pool.begin(), pool.end());
    std::vector<NodeSet> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
        NodeSet z;
        for (std::size_t i = 0; i < items.size(); ++i)
            if (mask & (std::size_t{1} << i)) z.insert(items[i]);
        if (backdoor_admissible(g, treatment, outcome, z).admissible) out.push_back(std::move(z));
    }
    std::sort(out.begin(), out.end(), [](const NodeSet& a, const NodeSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

CausalGraph intervene(const CausalGraph& g, const NodeSet& targets) {
    require_nodes(g, targets);
    for (const auto& t : targets)
        if (g.is_exogenous(t))
            throw Error(ErrorCode::ExogenousIntervention, "cannot intervene on exogenous node " + t);
    CausalGraph out = g;
    for (const auto& t : targets) {
        for (const auto& p : g.parents(t)) out.remove_edge(p, t);
        out.set_dynamic(t, false);
    }
    return out;
}

CausalGraph equilibrate(const CausalGraph& g) {
    CausalGraph out = g;
    for (const auto& n : g.dynamic_nodes()) {
        if (!g.info(n).uniquely_solvable)
            throw Error(ErrorCode::NotUniquelySolvable, "dynamic node " + n + " is not uniquely solvable");
        out.set_dynamic(n, false);
    }
    return out;
}

CausalGraph feedback_to_feedforward_rewrite(const CausalGraph& g, const std::string& controlled) {
    if (!g.has_node(controlled) || g.is_exogenous(controlled))
        throw Error(ErrorCode::ShapeMismatch, "no endogenous node named " + controlled);
    const NodeSet downstream = g.descendants(controlled);
    NodeSet loop_parents;
    for (const auto& p : g.parents(controlled))
        if (downstream.contains(p)) loop_parents.insert(p);
    if (loop_parents.empty())
        throw Error(ErrorCode::ShapeMismatch, "no directed cycle passes through " + controlled);

    // Exogenous causes of the fed-back signals that do not route through the controller.
    const CausalGraph cut = intervene(g, {controlled});
    NodeSet upstream;
    for (const auto& p : loop_parents)
        for (const auto& a : cut.ancestors(p))
            if (cut.is_exogenous(a)) upstream.insert(a);

    CausalGraph out = g;
    for (const auto& p : loop_parents) out.remove_edge(p, controlled);
    for (const auto& e : upstream)
        if (!out.has_edge(e, controlled)) out.add_edge(e, controlled);
    return out;
}

}  // namespace confound

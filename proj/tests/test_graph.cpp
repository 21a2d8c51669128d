#include "confound/graph.hpp"
#include "confound/graph_io.hpp"
#include "test_util.hpp"

#include <functional>
#include <random>

using namespace confound;

namespace {

// Path-enumeration d-separation: every simple path between A and B must be
// blocked by Z. Exponential, fine for the small graphs used here.
bool oracle_d_separated(const CausalGraph& g, const NodeSet& a, const NodeSet& b, const NodeSet& z) {
    auto blocked = [&](const std::vector<std::string>& path) {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const auto& prev = path[i - 1];
            const auto& node = path[i];
            const auto& next = path[i + 1];
            bool collider = g.has_edge(prev, node) && g.has_edge(next, node);
            if (collider) {
                bool open = z.contains(node);
                for (const auto& d : g.descendants(node)) open = open || z.contains(d);
                if (!open) return true;
            } else if (z.contains(node)) {
                return true;
            }
        }
        return false;
    };
    bool separated = true;
    std::vector<std::string> path;
    std::function<void(const std::string&)> walk = [&](const std::string& cur) {
        if (!separated) return;
        if (b.contains(cur) && path.size() > 1) {
            if (!blocked(path)) separated = false;
            return;
        }
        NodeSet nbrs = g.children(cur);
        for (const auto& p : g.parents(cur)) nbrs.insert(p);
        for (const auto& n : nbrs) {
            if (std::find(path.begin(), path.end(), n) != path.end()) continue;
            path.push_back(n);
            walk(n);
            path.pop_back();
        }
    };
    for (const auto& s : a) {
        if (b.contains(s)) return false;
        path = {s};
        walk(s);
    }
    return separated;
}

// Backdoor criterion restated: no descendant of t in Z, and Z separates t
// from o once t's outgoing edges are removed.
bool oracle_backdoor(const CausalGraph& g, const std::string& t, const std::string& o,
                     const NodeSet& z) {
    for (const auto& d : g.descendants(t))
        if (z.contains(d)) return false;
    CausalGraph cut = g;
    for (const auto& c : g.children(t)) cut.remove_edge(t, c);
    return oracle_d_separated(cut, {t}, {o}, z);
}

CausalGraph random_dag(std::mt19937_64& rng, int n, double p) {
    std::bernoulli_distribution edge(p), exo(0.5);
    std::vector<std::vector<int>> par(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < j; ++i)
            if (edge(rng)) par[j].push_back(i);
    CausalGraph g;
    for (int j = 0; j < n; ++j) {
        bool root = par[j].empty();
        g.add_node("n" + std::to_string(j), root && exo(rng) ? NodeKind::Exogenous : NodeKind::Endogenous);
    }
    for (int j = 0; j < n; ++j)
        for (int i : par[j]) g.add_edge("n" + std::to_string(i), "n" + std::to_string(j));
    return g;
}

NodeSet random_subset(std::mt19937_64& rng, const CausalGraph& g, const NodeSet& exclude) {
    std::bernoulli_distribution pick(0.35);
    NodeSet s;
    for (const auto& [name, info] : g.nodes())
        if (!exclude.contains(name) && pick(rng)) s.insert(name);
    return s;
}

}  // namespace

TEST_SUITE("structure") {
    TEST_CASE("feedforward graph") {
        auto g = build_mff();
        CHECK(g.node_count() == 5);
        CHECK(g.edges() == std::set<Edge>{{"y_r", "u"}, {"w", "u"}, {"u", "x"}, {"w", "x"}, {"x", "y"}});
        CHECK(g.is_exogenous("y_r"));
        CHECK(g.is_exogenous("w"));
        CHECK_FALSE(g.is_exogenous("u"));
        CHECK(is_acyclic(g));
        CHECK(g.descendants("u") == NodeSet{"x", "y"});
        CHECK(g.ancestors("u") == NodeSet{"w", "y_r"});
        CHECK(g.dynamic_nodes().empty());
        CHECK(build_mff_sdcm().dynamic_nodes() == NodeSet{"x"});
    }

    TEST_CASE("feedback graph") {
        auto g = build_mfb();
        CHECK(g.parents("u") == NodeSet{"y", "y_r"});
        CHECK_FALSE(is_acyclic(g));
        CHECK(g.descendants("u").contains("u"));
    }

    TEST_CASE("trivial acyclicity") {
        CausalGraph g;
        g.add_node("a", NodeKind::Endogenous);
        CHECK(is_acyclic(g));
    }

    TEST_CASE("construction errors") {
        CausalGraph g;
        g.add_node("e", NodeKind::Exogenous).add_node("a", NodeKind::Endogenous);
        CHECK_ERROR_CODE(g.add_node("a", NodeKind::Endogenous), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(g.add_edge("a", "e"), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(g.add_edge("a", "a"), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(g.add_edge("a", "zz"), ErrorCode::UnknownNode);
        CHECK_ERROR_CODE(g.add_node("d", NodeKind::Exogenous, true), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(g.info("zz"), ErrorCode::UnknownNode);
    }
}

TEST_SUITE("d-separation") {
    TEST_CASE("feedforward queries") {
        auto g = build_mff();
        CHECK_FALSE(d_separated(g, {"u"}, {"y"}, {}));
        CHECK(d_separated(g, {"y_r"}, {"w"}, {}));
        CHECK_FALSE(d_separated(g, {"y_r"}, {"w"}, {"u"}));
        CHECK_FALSE(d_separated(g, {"y_r"}, {"w"}, {"y"}));
        CHECK(d_separated(g, {"y_r"}, {"y"}, {"u", "w"}));
        CHECK(d_separated(g, {"u"}, {"y"}, {"x"}));
    }

    TEST_CASE("errors") {
        auto g = build_mff();
        CHECK_ERROR_CODE(d_separated(g, {"u"}, {"y"}, {"u"}), ErrorCode::OverlappingSets);
        CHECK_ERROR_CODE(d_separated(g, {"u"}, {"nope"}, {}), ErrorCode::UnknownNode);
        CHECK_ERROR_CODE(d_separated(build_mfb(), {"u"}, {"y"}, {}), ErrorCode::CyclicGraph);
    }

    TEST_CASE("agrees with path enumeration on random DAGs") {
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<int> node(0, 6);
        for (int trial = 0; trial < 300; ++trial) {
            auto g = random_dag(rng, 7, 0.3);
            std::string a = "n" + std::to_string(node(rng));
            std::string b = "n" + std::to_string(node(rng));
            if (a == b) continue;
            NodeSet z = random_subset(rng, g, {a, b});
            bool got = d_separated(g, {a}, {b}, z);
            CHECK(got == oracle_d_separated(g, {a}, {b}, z));
            CHECK(got == d_separated(g, {b}, {a}, z));
        }
    }
}

TEST_SUITE("backdoor") {
    TEST_CASE("feedforward judgments") {
        auto g = build_mff();
        auto empty = backdoor_admissible(g, "u", "y", {});
        CHECK_FALSE(empty.admissible);
        REQUIRE(empty.violating_paths.size() == 1);
        CHECK(empty.violating_paths[0] == std::vector<std::string>{"u", "w", "x", "y"});

        CHECK(backdoor_admissible(g, "u", "y", {"w"}).admissible);
        CHECK(backdoor_admissible(g, "u", "y", {"w", "y_r"}).admissible);
        CHECK_FALSE(backdoor_admissible(g, "u", "y", {"y_r"}).admissible);

        auto x = backdoor_admissible(g, "u", "y", {"x"});
        CHECK_FALSE(x.admissible);
        CHECK(x.descendant_violations == std::vector<std::string>{"x"});
    }

    TEST_CASE("enumerated adjustment sets") {
        auto sets = admissible_adjustment_sets(build_mff(), "u", "y");
        CHECK(sets == std::vector<NodeSet>{{"w"}, {"w", "y_r"}});
    }

    TEST_CASE("errors") {
        auto g = build_mff();
        CHECK_ERROR_CODE(backdoor_admissible(build_mfb(), "u", "y", {"w"}), ErrorCode::CyclicGraph);
        CHECK_ERROR_CODE(backdoor_admissible(g, "u", "u", {}), ErrorCode::InvalidArgument);
        CHECK_ERROR_CODE(backdoor_admissible(g, "u", "y", {"u"}), ErrorCode::OverlappingSets);
        CHECK_ERROR_CODE(backdoor_admissible(g, "u", "q", {}), ErrorCode::UnknownNode);
    }

    TEST_CASE("agrees with the cut-graph restatement on random DAGs") {
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> node(0, 6);
        int admissible = 0;
        for (int trial = 0; trial < 400; ++trial) {
            auto g = random_dag(rng, 7, 0.35);
            std::string t = "n" + std::to_string(node(rng));
            std::string o = "n" + std::to_string(node(rng));
            if (t == o) continue;
            NodeSet z = random_subset(rng, g, {t, o});
            auto rep = backdoor_admissible(g, t, o, z);
            bool expect = oracle_backdoor(g, t, o, z);
            CHECK(rep.admissible == expect);
            if (rep.admissible) {
                ++admissible;
                CHECK(rep.violating_paths.empty());
                CHECK(rep.descendant_violations.empty());
            } else {
                CHECK(rep.violating_paths.size() + rep.descendant_violations.size() > 0);
            }
        }
        CHECK(admissible > 0);
    }
}

TEST_SUITE("operations") {
    TEST_CASE("intervention") {
        auto fb = intervene(build_mfb(), {"u"});
        CHECK(is_acyclic(fb));
        CHECK(fb.parents("u").empty());
        CHECK(intervene(build_mff(), {}) == build_mff());
        CHECK(intervene(build_mff(), {"u"}).edges() == fb.edges());
        CHECK(fb.edges() == std::set<Edge>{{"u", "x"}, {"w", "x"}, {"x", "y"}});
        CHECK(fb.has_node("y_r"));
        CHECK_ERROR_CODE(intervene(build_mff(), {"w"}), ErrorCode::ExogenousIntervention);
        CHECK_ERROR_CODE(intervene(build_mff(), {"zz"}), ErrorCode::UnknownNode);
        auto sd = intervene(build_mff_sdcm(), {"x"});
        CHECK_FALSE(sd.info("x").dynamic);
    }

    TEST_CASE("intervention is idempotent") {
        for (const auto& g : {build_mff(), build_mfb(), build_mff_sdcm()}) {
            for (const NodeSet& i : {NodeSet{}, NodeSet{"u"}, NodeSet{"x"}, NodeSet{"u", "y"}}) {
                auto once = intervene(g, i);
                CHECK(intervene(once, i) == once);
            }
        }
    }

    TEST_CASE("equilibration") {
        CHECK(equilibrate(build_mff_sdcm()) == build_mff());
        CHECK(equilibrate(build_mff()) == build_mff());
        for (const NodeSet& i : {NodeSet{}, NodeSet{"u"}}) {
            CHECK(equilibrate(intervene(build_mff_sdcm(), i)) == intervene(equilibrate(build_mff_sdcm()), i));
        }
        CausalGraph bad;
        bad.add_node("x", NodeKind::Endogenous, true, false);
        CHECK_ERROR_CODE(equilibrate(bad), ErrorCode::NotUniquelySolvable);
    }

    TEST_CASE("feedback rewrite") {
        auto ff = feedback_to_feedforward_rewrite(build_mfb());
        CHECK(ff == build_mff());
        CHECK(intervene(ff, {"u"}) == intervene(build_mfb(), {"u"}));
        CHECK_ERROR_CODE(feedback_to_feedforward_rewrite(build_mff()), ErrorCode::ShapeMismatch);
        // After the rewrite the backdoor question becomes answerable.
        CHECK(backdoor_admissible(ff, "u", "y", {"w"}).admissible);
    }
}

TEST_SUITE("graph text") {
    TEST_CASE("round trip") {
        for (const auto& g : {build_mff(), build_mfb(), build_mff_sdcm()}) {
            CHECK(parse_graph(format_graph(g)) == g);
        }
        CausalGraph u;
        u.add_node("x", NodeKind::Endogenous, true, false);
        CHECK(parse_graph(format_graph(u)) == u);
    }

    TEST_CASE("parses the documented format") {
        auto g = parse_graph(
            "# feedforward\n"
            "exo: y_r, w\n"
            "endo: u, x, y\n"
            "dyn: x\n"
            "y_r -> u\nw -> u\nu -> x\nw -> x\nx -> y\n");
        CHECK(g == build_mff_sdcm());
    }

    TEST_CASE("shipped graph files") {
        std::string dir = CONFOUND_CONFIG_DIR;
        CHECK(read_graph(dir + "/m_ff.graph") == build_mff());
        CHECK(read_graph(dir + "/m_fb.graph") == build_mfb());
        CHECK(read_graph(dir + "/m_ff_sdcm.graph") == build_mff_sdcm());
    }

    TEST_CASE("parse errors") {
        CHECK_ERROR_CODE(parse_graph("endo: a\na -> b\n"), ErrorCode::ConfigParse);
        CHECK_ERROR_CODE(parse_graph("endo: a, b\na => b\n"), ErrorCode::ConfigParse);
        CHECK_ERROR_CODE(parse_graph("colour: a\n"), ErrorCode::ConfigParse);
        CHECK_ERROR_CODE(parse_graph("exo: a\nendo: a\n"), ErrorCode::ConfigParse);
        CHECK_ERROR_CODE(read_graph("/nonexistent/file.graph"), ErrorCode::IoError);
    }
}

#include "confound/graph_io.hpp"

#include "confound/error.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace confound {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto piece = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        if (!piece.empty()) out.push_back(piece);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string join(const NodeSet& s) {
    std::string out;
    for (const auto& n : s) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

}  // namespace

CausalGraph parse_graph(std::string_view text) {
    NodeSet exo, endo, dyn, unsolvable;
    std::vector<std::pair<Edge, int>> edges;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        line = trim(line);
        if (line.empty()) continue;
        const auto where = " (line " + std::to_string(line_no) + ")";
        if (const auto arrow = line.find("->"); arrow != std::string::npos) {
            auto parent = trim(std::string_view(line).substr(0, arrow));
            auto child = trim(std::string_view(line).substr(arrow + 2));
            if (parent.empty() || child.empty())
                throw Error(ErrorCode::ConfigParse, "malformed edge" + where);
            edges.push_back({{parent, child}, line_no});
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw Error(ErrorCode::ConfigParse, "expected 'key: list' or 'a -> b'" + where);
        const auto key = trim(std::string_view(line).substr(0, colon));
        const auto items = split_list(std::string_view(line).substr(colon + 1));
        NodeSet* target = nullptr;
        if (key == "exo") target = &exo;
        else if (key == "endo") target = &endo;
        else if (key == "dyn") target = &dyn;
        else if (key == "unsolvable") target = &unsolvable;
        else throw Error(ErrorCode::ConfigParse, "unknown header '" + key + "'" + where);
        target->insert(items.begin(), items.end());
    }

    CausalGraph g;
    try {
        for (const auto& n : exo) {
            if (endo.contains(n)) throw Error(ErrorCode::ConfigParse, "node both exo and endo: " + n);
            g.add_node(n, NodeKind::Exogenous);
        }
        for (const auto& n : endo) g.add_node(n, NodeKind::Endogenous, dyn.contains(n), !unsolvable.contains(n));
        for (const auto& n : dyn)
            if (!endo.contains(n)) throw Error(ErrorCode::ConfigParse, "dyn node must be endo: " + n);
        for (const auto& n : unsolvable)
            if (!dyn.contains(n)) throw Error(ErrorCode::ConfigParse, "unsolvable node must be dyn: " + n);
        for (const auto& [edge, line] : edges) {
            if (!g.has_node(edge.first) || !g.has_node(edge.second))
                throw Error(ErrorCode::ConfigParse, "edge uses undeclared node (line " +
                                                        std::to_string(line) + ")");
            g.add_edge(edge.first, edge.second);
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ConfigParse) throw;
        throw Error(ErrorCode::ConfigParse, e.what());
    }
    return g;
}

std::string format_graph(const CausalGraph& g) {
    NodeSet exo, endo, dyn, unsolvable;
    for (const auto& [name, info] : g.nodes()) {
        (info.kind == NodeKind::Exogenous ? exo : endo).insert(name);
        if (info.dynamic) dyn.insert(name);
        if (info.dynamic && !info.uniquely_solvable) unsolvable.insert(name);
    }
    std::ostringstream out;
    out << "exo: " << join(exo) << "\n";
    out << "endo: " << join(endo) << "\n";
    if (!dyn.empty()) out << "dyn: " << join(dyn) << "\n";
    if (!unsolvable.empty()) out << "unsolvable: " << join(unsolvable) << "\n";
    for (const auto& [p, c] : g.edges()) out << p << " -> " << c << "\n";
    return out.str();
}

CausalGraph read_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph(buf.str());
}

void write_graph(const CausalGraph& g, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << format_graph(g);
    if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace confound

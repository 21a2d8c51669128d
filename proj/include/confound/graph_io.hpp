#pragma once

#include "confound/graph.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace confound {

// Edge-list text format:
//
//   # comment
//   exo: y_r, w
//   endo: u, x, y
//   dyn: x            (optional; dynamic endogenous nodes)
//   unsolvable: x     (optional; dynamic nodes lacking a unique equilibrium)
//   y_r -> u
//   w -> u
//
// Every node in an edge must be declared in exo: or endo:.

CausalGraph parse_graph(std::string_view text);
std::string format_graph(const CausalGraph& g);

CausalGraph read_graph(const std::filesystem::path& path);
void write_graph(const CausalGraph& g, const std::filesystem::path& path);

}  // namespace confound

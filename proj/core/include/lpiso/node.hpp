#pragma once

#include "lpiso/stepfn.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lpiso {

/// A finite sequence of naturals; the empty sequence is the root. std::vector
/// ordering is lexicographic, so a prefix sorts before its extensions.
using Node = std::vector<std::uint32_t>;

inline const Node kRoot{};

/// mu is a (not necessarily strict) prefix of nu.
bool is_prefix(const Node& mu, const Node& nu);
inline bool is_strict_prefix(const Node& mu, const Node& nu) {
    return mu.size() < nu.size() && is_prefix(mu, nu);
}
inline bool comparable(const Node& a, const Node& b) { return is_prefix(a, b) || is_prefix(b, a); }

Node parent(const Node& nu);  // precondition: nu is not the root
Node child(const Node& nu, std::uint32_t i);

std::string to_string(const Node& nu);
std::ostream& operator<<(std::ostream& os, const Node& nu);

using NodeSet = std::set<Node>;

/// Nonempty, root-free, and containing every non-root ancestor of its members.
bool is_orchard(const NodeSet& s);
/// Contains the root and is prefix closed.
bool is_tree(const NodeSet& s);

/// Children of nu inside s, in lexicographic order.
std::vector<Node> children_in(const NodeSet& s, const Node& nu);

/// Largest i with (i) in s, or -1.
long max_top_index(const NodeSet& s);
/// Largest i with nu^(i) in s, or -1.
long max_child_index(const NodeSet& s, const Node& nu);

/// A finite map from nodes to step functions.
using NodeMap = std::map<Node, StepFn>;

NodeSet domain(const NodeMap& m);

template <class V>
std::vector<Node> children_of(const std::map<Node, V>& m, const Node& nu) {
    std::vector<Node> out;
    for (auto it = m.upper_bound(nu); it != m.end() && is_prefix(nu, it->first); ++it) {
        if (it->first.size() == nu.size() + 1) {
            out.push_back(it->first);
        }
    }
    return out;
}

/// Nodes of the map with at least one child in the map.
template <class V>
std::vector<Node> nonterminal_nodes(const std::map<Node, V>& m) {
    std::vector<Node> out;
    for (const auto& [nu, v] : m) {
        if (!children_of(m, nu).empty()) {
            out.push_back(nu);
        }
    }
    return out;
}

}  // namespace lpiso

#include "lpiso/node.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace lpiso {

bool is_prefix(const Node& mu, const Node& nu) {
    return mu.size() <= nu.size() && std::equal(mu.begin(), mu.end(), nu.begin());
}

Node parent(const Node& nu) {
    if (nu.empty()) {
        throw std::invalid_argument("the root has no parent");
    }
    return Node(nu.begin(), nu.end() - 1);
}

Node child(const Node& nu, std::uint32_t i) {
    Node c = nu;
    c.push_back(i);
    return c;
}

std::string to_string(const Node& nu) {
    std::string s = "(";
    for (std::size_t i = 0; i < nu.size(); ++i) {
        s += (i ? "," : "") + std::to_string(nu[i]);
    }
    return s + ")";
}

std::ostream& operator<<(std::ostream& os, const Node& nu) { return os << to_string(nu); }

bool is_orchard(const NodeSet& s) {
    if (s.empty() || s.contains(kRoot)) {
        return false;
    }
    for (const auto& nu : s) {
        if (nu.size() > 1 && !s.contains(parent(nu))) {
            return false;
        }
    }
    return true;
}

bool is_tree(const NodeSet& s) {
    if (!s.contains(kRoot)) {
        return false;
    }
    for (const auto& nu : s) {
        if (!nu.empty() && !s.contains(parent(nu))) {
            return false;
        }
    }
    return true;
}

std::vector<Node> children_in(const NodeSet& s, const Node& nu) {
    std::vector<Node> out;
    for (auto it = s.upper_bound(nu); it != s.end() && is_prefix(nu, *it); ++it) {
        if (it->size() == nu.size() + 1) {
            out.push_back(*it);
        }
    }
    return out;
}

long max_top_index(const NodeSet& s) { return max_child_index(s, kRoot); }

long max_child_index(const NodeSet& s, const Node& nu) {
    long best = -1;
    for (const auto& c : children_in(s, nu)) {
        best = std::max(best, static_cast<long>(c.back()));
    }
    return best;
}

NodeSet domain(const NodeMap& m) {
    NodeSet s;
    for (const auto& [nu, f] : m) {
        s.insert(nu);
    }
    return s;
}

}  // namespace lpiso

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace critwalk {

using Vertex = std::uint32_t;

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite connected simple graph with unit-conductance edges, a distinguished
// root and a lattice embedding of the vertices. Immutable after construction.
class RootedGraph {
public:
    RootedGraph() = default;

    // `edges` may list each undirected pair in any order; duplicates and
    // self-loops are rejected. The graph must be connected.
    RootedGraph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges,
                Vertex root, int dim = 1,
                std::vector<std::int64_t> locations = {});

    std::size_t num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    Vertex root() const { return root_; }
    int dim() const { return dim_; }

    const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }

    std::span<const Vertex> neighbors(Vertex v) const {
        return {adj_.data() + adj_off_[v], adj_off_[v + 1] - adj_off_[v]};
    }
    std::size_t degree(Vertex v) const { return adj_off_[v + 1] - adj_off_[v]; }

    bool has_locations() const { return !loc_.empty(); }
    // Lattice point of v, length dim().
    std::span<const std::int64_t> location(Vertex v) const {
        return {loc_.data() + std::size_t(v) * dim_, std::size_t(dim_)};
    }

    // l1 (lattice) distance between the embedded endpoints.
    std::int64_t lattice_distance(Vertex u, Vertex v) const;

    // BFS distances from `source`; -1 never occurs on connected graphs.
    std::vector<std::int32_t> bfs_distances(Vertex source) const;

    // BFS restricted to `allowed` (plus `source`); unreachable -> -1.
    std::vector<std::int32_t> bfs_distances_within(
        Vertex source, const std::vector<std::uint8_t>& allowed) const;

    // Graph distance; BFS from u, early exit at v.
    std::int32_t distance(Vertex u, Vertex v) const;

    bool is_tree() const { return edges_.size() + 1 == n_; }

private:
    std::size_t n_ = 0;
    std::vector<std::pair<Vertex, Vertex>> edges_;
    Vertex root_ = 0;
    int dim_ = 1;
    std::vector<std::int64_t> loc_;
    std::vector<Vertex> adj_;
    std::vector<std::uint32_t> adj_off_;
};

// Edge-list text format. Header `d <dim> root <idx>`, one `u v` line per
// edge, optional `loc <idx> x1 .. xd` lines.
void write_edge_list(std::ostream& os, const RootedGraph& g);
RootedGraph read_edge_list(std::istream& is);
void save_edge_list(const std::string& path, const RootedGraph& g);
RootedGraph load_edge_list(const std::string& path);

} // namespace critwalk

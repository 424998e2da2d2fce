#include "critwalk/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

namespace critwalk {

RootedGraph::RootedGraph(std::size_t n, std::vector<std::pair<Vertex, Vertex>> edges,
                         Vertex root, int dim, std::vector<std::int64_t> locations)
    : n_(n), edges_(std::move(edges)), root_(root), dim_(dim), loc_(std::move(locations)) {
    if (n_ == 0) throw GraphError("empty graph");
    if (root_ >= n_) throw GraphError("root out of range");
    if (dim_ < 1) throw GraphError("dimension must be >= 1");
    if (!loc_.empty() && loc_.size() != n_ * std::size_t(dim_))
        throw GraphError("location table has wrong size");

    for (auto& [u, v] : edges_) {
        if (u >= n_ || v >= n_) throw GraphError("edge endpoint out of range");
        if (u == v) throw GraphError("self-loop");
        if (u > v) std::swap(u, v);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw GraphError("parallel edge");

    adj_off_.assign(n_ + 1, 0);
    for (const auto& [u, v] : edges_) {
        ++adj_off_[u + 1];
        ++adj_off_[v + 1];
    }
    for (std::size_t i = 1; i <= n_; ++i) adj_off_[i] += adj_off_[i - 1];
    adj_.resize(2 * edges_.size());
    std::vector<std::uint32_t> fill(adj_off_.begin(), adj_off_.end() - 1);
    for (const auto& [u, v] : edges_) {
        adj_[fill[u]++] = v;
        adj_[fill[v]++] = u;
    }

    if (n_ > 1) {
        auto dist = bfs_distances(root_);
        for (std::size_t v = 0; v < n_; ++v)
            if (dist[v] < 0) throw GraphError("graph is not connected");
    }
}

std::int64_t RootedGraph::lattice_distance(Vertex u, Vertex v) const {
    std::int64_t d = 0;
    auto a = location(u), b = location(v);
    for (int i = 0; i < dim_; ++i) d += std::llabs(a[i] - b[i]);
    return d;
}

std::vector<std::int32_t> RootedGraph::bfs_distances(Vertex source) const {
    std::vector<std::int32_t> dist(n_, -1);
    std::vector<Vertex> queue;
    queue.reserve(n_);
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex u = queue[head];
        for (Vertex w : neighbors(u))
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

std::vector<std::int32_t> RootedGraph::bfs_distances_within(
    Vertex source, const std::vector<std::uint8_t>& allowed) const {
    std::vector<std::int32_t> dist(n_, -1);
    std::vector<Vertex> queue;
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex u = queue[head];
        for (Vertex w : neighbors(u))
            if (dist[w] < 0 && allowed[w]) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

std::int32_t RootedGraph::distance(Vertex u, Vertex v) const {
    if (u == v) return 0;
    std::vector<std::int32_t> dist(n_, -1);
    std::vector<Vertex> queue;
    dist[u] = 0;
    queue.push_back(u);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        Vertex x = queue[head];
        for (Vertex w : neighbors(x)) {
            if (dist[w] >= 0) continue;
            dist[w] = dist[x] + 1;
            if (w == v) return dist[w];
            queue.push_back(w);
        }
    }
    return -1;
}

void write_edge_list(std::ostream& os, const RootedGraph& g) {
    os << "d " << g.dim() << " root " << g.root() << "\n";
    for (const auto& [u, v] : g.edges()) os << u << " " << v << "\n";
    if (g.has_locations()) {
        for (std::size_t v = 0; v < g.num_vertices(); ++v) {
            os << "loc " << v;
            for (auto x : g.location(Vertex(v))) os << " " << x;
            os << "\n";
        }
    }
}

RootedGraph read_edge_list(std::istream& is) {
    std::string line;
    int dim = -1;
    Vertex root = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::pair<Vertex, std::vector<std::int64_t>>> locs;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "d") {
            std::string kw;
            if (!(ss >> dim >> kw >> root) || kw != "root")
                throw GraphError("bad header line");
        } else if (tok == "loc") {
            Vertex v;
            if (!(ss >> v)) throw GraphError("bad loc line");
            std::vector<std::int64_t> x;
            std::int64_t c;
            while (ss >> c) x.push_back(c);
            if (dim > 0 && int(x.size()) != dim) throw GraphError("loc arity mismatch");
            locs.emplace_back(v, std::move(x));
        } else {
            Vertex u = Vertex(std::stoul(tok)), v;
            if (!(ss >> v)) throw GraphError("bad edge line");
            edges.emplace_back(u, v);
            n = std::max<std::size_t>(n, std::max(u, v) + 1);
        }
    }
    if (dim < 1) throw GraphError("missing header");
    n = std::max<std::size_t>(n, root + 1);
    std::vector<std::int64_t> table;
    if (!locs.empty()) {
        table.assign(n * std::size_t(dim), 0);
        for (auto& [v, x] : locs) {
            if (v >= n) throw GraphError("loc vertex out of range");
            std::copy(x.begin(), x.end(), table.begin() + std::size_t(v) * dim);
        }
    }
    return RootedGraph(n, std::move(edges), root, dim, std::move(table));
}

void save_edge_list(const std::string& path, const RootedGraph& g) {
    std::ofstream f(path);
    if (!f) throw GraphError("cannot open " + path);
    write_edge_list(f, g);
}

RootedGraph load_edge_list(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw GraphError("cannot open " + path);
    return read_edge_list(f);
}

} // namespace critwalk

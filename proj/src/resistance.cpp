#include "critwalk/resistance.hpp"
#include "critwalk/linsolve.hpp"

#include <vector>

namespace critwalk {

AbsorbedSolver::AbsorbedSolver(const RootedGraph& g, const std::vector<std::uint8_t>& interior)
    : g_(g), local_(g.num_vertices(), -1) {
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (interior[v]) {
            local_[v] = std::int32_t(idx_of_.size());
            idx_of_.push_back(v);
        }
    if (idx_of_.empty()) throw SolveError("empty interior");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(idx_of_.size() * 4);
    for (std::size_t i = 0; i < idx_of_.size(); ++i) {
        Vertex v = idx_of_[i];
        trip.emplace_back(int(i), int(i), double(g.degree(v)));
        for (Vertex w : g.neighbors(v))
            if (local_[w] >= 0) trip.emplace_back(int(i), local_[w], -1.0);
    }
    Eigen::SparseMatrix<double> L(int(idx_of_.size()), int(idx_of_.size()));
    L.setFromTriplets(trip.begin(), trip.end());
    ldlt_.compute(L);
    if (ldlt_.info() != Eigen::Success)
        throw SolveError("absorbed-chain factorization failed (disconnected interior?)");
}

std::vector<double> AbsorbedSolver::solve(const std::vector<double>& boundary_values,
                                          const std::vector<double>& rhs) const {
    Eigen::VectorXd b(int(idx_of_.size()));
    for (std::size_t i = 0; i < idx_of_.size(); ++i) {
        Vertex v = idx_of_[i];
        double acc = rhs[v];
        for (Vertex w : g_.neighbors(v))
            if (local_[w] < 0) acc += boundary_values[w];
        b[int(i)] = acc;
    }
    Eigen::VectorXd u = ldlt_.solve(b);
    if (ldlt_.info() != Eigen::Success) throw SolveError("absorbed-chain solve failed");
    std::vector<double> full(boundary_values);
    for (std::size_t i = 0; i < idx_of_.size(); ++i) full[idx_of_[i]] = u[int(i)];
    return full;
}

struct ResistanceSolver::Impl {
    const RootedGraph& g;
    Vertex ground;
    std::vector<std::int32_t> local;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool tree;
    std::vector<std::int32_t> root_dist;  // tree fast path

    explicit Impl(const RootedGraph& gr) : g(gr), ground(gr.root()), tree(gr.is_tree()) {
        if (tree) {
            root_dist = g.bfs_distances(g.root());
            return;
        }
        local.assign(g.num_vertices(), -1);
        std::int32_t k = 0;
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            if (v != ground) local[v] = k++;
        std::vector<Eigen::Triplet<double>> trip;
        for (Vertex v = 0; v < g.num_vertices(); ++v) {
            if (v == ground) continue;
            trip.emplace_back(local[v], local[v], double(g.degree(v)));
            for (Vertex w : g.neighbors(v))
                if (w != ground) trip.emplace_back(local[v], local[w], -1.0);
        }
        Eigen::SparseMatrix<double> L(k, k);
        L.setFromTriplets(trip.begin(), trip.end());
        ldlt.compute(L);
        if (ldlt.info() != Eigen::Success)
            throw SolveError("Laplacian factorization failed");
    }

    double resistance(Vertex x, Vertex y) const {
        if (x == y) return 0.0;
        if (tree) {
            // On a tree the resistance is the path length; use the exact
            // lca-free identity d(x,y) = d(r,x)+d(r,y)-2 d(r,lca). BFS from x
            // would also do, but distance() suffices and stays exact.
            return double(g.distance(x, y));
        }
        Eigen::VectorXd b = Eigen::VectorXd::Zero(ldlt.rows());
        if (x != ground) b[local[x]] += 1.0;
        if (y != ground) b[local[y]] -= 1.0;
        Eigen::VectorXd u = ldlt.solve(b);
        double ux = (x == ground) ? 0.0 : u[local[x]];
        double uy = (y == ground) ? 0.0 : u[local[y]];
        return ux - uy;
    }
};

ResistanceSolver::ResistanceSolver(const RootedGraph& g) : impl_(std::make_unique<Impl>(g)) {}
ResistanceSolver::~ResistanceSolver() = default;
double ResistanceSolver::resistance(Vertex x, Vertex y) const { return impl_->resistance(x, y); }

double effective_resistance(const RootedGraph& g, Vertex x, Vertex y) {
    if (x == y) return 0.0;
    if (g.is_tree()) return double(g.distance(x, y));
    ResistanceSolver solver(g);
    return solver.resistance(x, y);
}

TriangleConductances triangle_arm_conductances(const RootedGraph& g,
                                               Vertex x, Vertex y, Vertex z) {
    if (x == y || y == z || x == z)
        throw GraphError("triangle_arm_conductances: vertices must be distinct");

    std::vector<std::uint8_t> interior(g.num_vertices(), 1);
    interior[x] = interior[y] = interior[z] = 0;

    // Interior vertices in components not touching {x,y,z} are irrelevant but
    // would make the system singular; keep only those reachable from the
    // terminals.
    {
        std::vector<std::uint8_t> keep(g.num_vertices(), 0);
        std::vector<Vertex> queue = {x, y, z};
        for (std::size_t h = 0; h < queue.size(); ++h)
            for (Vertex w : g.neighbors(queue[h]))
                if (!keep[w] && interior[w]) {
                    keep[w] = 1;
                    queue.push_back(w);
                }
        for (Vertex v = 0; v < g.num_vertices(); ++v)
            if (interior[v] && !keep[v]) interior[v] = 0;
    }

    bool has_interior = false;
    for (auto f : interior)
        if (f) { has_interior = true; break; }

    std::vector<double> u_y(g.num_vertices(), 0.0), u_z(g.num_vertices(), 0.0);
    u_y[y] = 1.0;
    u_z[z] = 1.0;
    if (has_interior) {
        AbsorbedSolver solver(g, interior);
        std::vector<double> zero(g.num_vertices(), 0.0);
        u_y = solver.solve(u_y, zero);
        u_z = solver.solve(u_z, zero);
    }

    auto escape_sum = [&](Vertex from, const std::vector<double>& u) {
        double s = 0.0;
        for (Vertex w : g.neighbors(from)) s += u[w];
        return s;
    };
    TriangleConductances c{};
    c.c_xy = escape_sum(x, u_y);
    c.c_zx = escape_sum(x, u_z);
    c.c_yz = escape_sum(y, u_z);
    return c;
}

} // namespace critwalk

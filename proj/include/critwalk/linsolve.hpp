#pragma once

#include "critwalk/graph.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <vector>

namespace critwalk {

struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Factorization of the graph Laplacian restricted to an interior vertex set
// (unit conductances). Solves
//     deg(v) u(v) - sum_{w ~ v} u(w) = rhs(v)      for v interior,
// with u prescribed on the complement. Interior components must touch the
// boundary, otherwise the system is singular and factorization fails.
class AbsorbedSolver {
public:
    AbsorbedSolver(const RootedGraph& g, const std::vector<std::uint8_t>& interior);

    // boundary_value(v) is read for every non-interior neighbor of the
    // interior; rhs indexed by vertex. Returns u on all vertices (boundary
    // entries copied through).
    std::vector<double> solve(const std::vector<double>& boundary_values,
                              const std::vector<double>& rhs) const;

    std::size_t interior_size() const { return idx_of_.size(); }
    bool is_interior(Vertex v) const { return local_[v] >= 0; }
    int local_index(Vertex v) const { return local_[v]; }

private:
    const RootedGraph& g_;
    std::vector<std::int32_t> local_;
    std::vector<Vertex> idx_of_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

} // namespace critwalk

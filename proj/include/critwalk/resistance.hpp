#pragma once

#include "critwalk/graph.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <memory>

namespace critwalk {

// Two-point effective resistance of the unit-conductance network.
// R(x,x) = 0 by convention. Trees short-circuit to the path length.
double effective_resistance(const RootedGraph& g, Vertex x, Vertex y);

// Reusable factorization for many pairs on one graph (Laplacian grounded at
// one vertex).
class ResistanceSolver {
public:
    explicit ResistanceSolver(const RootedGraph& g);
    ~ResistanceSolver();
    double resistance(Vertex x, Vertex y) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Pairwise conductances of a triangle of vertices, defined through escape
// probabilities: c(x,y) = deg(x) P_x[T_y < T_z and T_y < T_x^+]. Exact by one
// absorbed-chain solve per target vertex.
struct TriangleConductances {
    double c_xy, c_yz, c_zx;
};
TriangleConductances triangle_arm_conductances(const RootedGraph& g,
                                               Vertex x, Vertex y, Vertex z);

} // namespace critwalk

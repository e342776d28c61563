#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netlasso/graph.hpp"

namespace netlasso {

/// Dense combinatorial Laplacian: diagonal holds weighted degrees, the
/// off-diagonal entry for an edge is minus its weight. Guarded to N <= 5000.
Eigen::MatrixXd laplacian(const DataGraph& g);

/// Sum over edges of W_{i,j} (x[j] - x[i])^2; equals x^T L x.
double quadratic_form(const DataGraph& g, const GraphSignal& x);

/// Orthonormal Laplacian eigenbasis, eigenvalues ascending. Each
/// eigenvector's sign is fixed by making its largest-magnitude entry
/// (smallest index on ties) positive.
struct GftBasis {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd vectors;  // column l is the l-th eigenvector

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

GftBasis gft_basis(const DataGraph& g);

/// Coefficients u_l^T x for every l.
std::vector<double> gft(const GftBasis& basis, const GraphSignal& x);

/// Reconstruction sum_l coeff[l] u_l.
GraphSignal inverse_gft(const GftBasis& basis, std::span<const double> coefficients);

/// Sum of the selected eigenvectors (0-based indices); its GFT is the
/// indicator of the active set.
GraphSignal band_limited_signal(const GftBasis& basis, std::span<const int> active);

using SweepCallback = std::function<void(int sweep, std::span<const double> x)>;

/// Harmonic baseline: sampled nodes are clamped to their observed values and
/// every unsampled node is repeatedly replaced by the weighted average of its
/// neighbors, sweeping nodes in ascending order, in place, for exactly
/// `iterations` sweeps. Isolated unsampled nodes keep their zero
/// initialization (reported on stderr, not an error).
GraphSignal label_propagation(const DataGraph& g, const Observation& obs, int iterations,
                              const SweepCallback& on_sweep = {});

}  // namespace netlasso

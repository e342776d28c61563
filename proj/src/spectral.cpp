#include "netlasso/spectral.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace netlasso {

namespace {
constexpr int kDenseGuard = 5000;
}

Eigen::MatrixXd laplacian(const DataGraph& g) {
    if (g.node_count() > kDenseGuard) {
        throw std::invalid_argument("dense Laplacian is limited to 5000 nodes");
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
    for (const auto& e : g.edges()) {
        m(e.i, e.i) += e.w;
        m(e.j, e.j) += e.w;
        m(e.i, e.j) -= e.w;
        m(e.j, e.i) -= e.w;
    }
    return m;
}

double quadratic_form(const DataGraph& g, const GraphSignal& x) {
    if (x.size() != g.node_count()) {
        throw std::invalid_argument("signal length does not match the graph");
    }
    double q = 0.0;
    for (const auto& e : g.edges()) {
        const double d = x[e.j] - x[e.i];
        q += e.w * d * d;
    }
    return q;
}

GftBasis gft_basis(const DataGraph& g) {
    const Eigen::MatrixXd l = laplacian(g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(l);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("eigendecomposition failed");
    }

    GftBasis basis;
    basis.eigenvalues = solver.eigenvalues();
    basis.vectors = solver.eigenvectors();

    for (int c = 0; c < basis.vectors.cols(); ++c) {
        int arg = 0;
        double best = 0.0;
        for (int r = 0; r < basis.vectors.rows(); ++r) {
            const double mag = std::abs(basis.vectors(r, c));
            if (mag > best + 1e-15) {
                best = mag;
                arg = r;
            }
        }
        if (basis.vectors(arg, c) < 0.0) basis.vectors.col(c) *= -1.0;
    }
    return basis;
}

std::vector<double> gft(const GftBasis& basis, const GraphSignal& x) {
    if (x.size() != basis.size()) {
        throw std::invalid_argument("signal length does not match the basis");
    }
    const Eigen::Map<const Eigen::VectorXd> v(x.values().data(), x.size());
    const Eigen::VectorXd coeffs = basis.vectors.transpose() * v;
    return {coeffs.data(), coeffs.data() + coeffs.size()};
}

GraphSignal inverse_gft(const GftBasis& basis, std::span<const double> coefficients) {
    if (static_cast<int>(coefficients.size()) != basis.size()) {
        throw std::invalid_argument("coefficient count does not match the basis");
    }
    const Eigen::Map<const Eigen::VectorXd> c(coefficients.data(),
                                              static_cast<Eigen::Index>(coefficients.size()));
    const Eigen::VectorXd v = basis.vectors * c;
    return GraphSignal(std::vector<double>(v.data(), v.data() + v.size()));
}

GraphSignal band_limited_signal(const GftBasis& basis, std::span<const int> active) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.size());
    for (int l : active) {
        if (l < 0 || l >= basis.size()) {
            throw std::invalid_argument("band index out of range");
        }
        v += basis.vectors.col(l);
    }
    return GraphSignal(std::vector<double>(v.data(), v.data() + v.size()));
}

GraphSignal label_propagation(const DataGraph& g, const Observation& obs, int iterations,
                              const SweepCallback& on_sweep) {
    if (obs.sample_count() == 0) {
        throw std::invalid_argument("label propagation needs at least one sampled node");
    }
    if (iterations < 1) throw std::invalid_argument("iteration count must be positive");

    std::vector<double> x(static_cast<std::size_t>(g.node_count()), 0.0);
    std::vector<bool> clamped(static_cast<std::size_t>(g.node_count()), false);
    for (int k = 0; k < obs.sample_count(); ++k) {
        const int v = obs.nodes()[static_cast<std::size_t>(k)];
        if (v >= g.node_count()) throw std::invalid_argument("sampled node out of range");
        x[static_cast<std::size_t>(v)] = obs.values()[static_cast<std::size_t>(k)];
        clamped[static_cast<std::size_t>(v)] = true;
    }

    bool warned = false;
    for (int sweep = 0; sweep < iterations; ++sweep) {
        for (int v = 0; v < g.node_count(); ++v) {
            if (clamped[static_cast<std::size_t>(v)]) continue;
            const auto nbrs = g.neighbors(v);
            if (nbrs.empty()) {
                if (!warned) {
                    std::cerr << "label_propagation: isolated unsampled node " << (v + 1)
                              << " keeps value 0\n";
                    warned = true;
                }
                continue;
            }
            double num = 0.0;
            double den = 0.0;
            for (const auto& nb : nbrs) {
                num += nb.weight * x[static_cast<std::size_t>(nb.node)];
                den += nb.weight;
            }
            x[static_cast<std::size_t>(v)] = num / den;
        }
        if (on_sweep) on_sweep(sweep + 1, std::span<const double>(x));
    }
    return GraphSignal(std::move(x));
}

}  // namespace netlasso

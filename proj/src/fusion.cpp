#include "treekey/fusion.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace treekey {

Plane fuse_pca(const ChannelStack& stack) {
    const int p = static_cast<int>(stack.size());
    if (p < 2) throw EmptyInputError("fusion needs at least 2 planes");
    const Eigen::Index n =
        static_cast<Eigen::Index>(stack.width) * stack.height;
    if (n < 2) throw EmptyInputError("fusion needs at least 2 pixels");

    // Canonical plane order (sorted by name) makes the result independent of
    // how the stack was assembled.
    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return stack.names[a] < stack.names[b]; });

    Eigen::MatrixXd X(n, p);  // pixels as rows, planes as columns
    for (int c = 0; c < p; ++c) {
        const Plane& pl = stack.planes[order[c]];
        X.col(c) = Eigen::Map<const Eigen::VectorXd>(pl.data(), n);
    }
    const Eigen::RowVectorXd mean = X.colwise().mean();
    X.rowwise() -= mean;

    const Eigen::MatrixXd cov = X.transpose() * X / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
        throw Error("eigendecomposition failed");
    const double lambda_max = es.eigenvalues()(p - 1);
    if (!(lambda_max > 1e-14))
        throw DegenerateInputError("all planes constant: covariance is zero");

    Eigen::VectorXd v = es.eigenvectors().col(p - 1);
    // Sign convention: largest-magnitude entry positive (first one on ties).
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < p; ++i) {
        const double a = std::abs(v(i));
        if (a > best) {
            best = a;
            arg = i;
        }
    }
    if (v(arg) < 0.0) v = -v;

    const Eigen::VectorXd proj = X * v;
    Plane out(stack.height, stack.width);
    Eigen::Map<Eigen::VectorXd>(out.data(), n) = proj;
    return rescale_unit(out);
}

}  // namespace treekey

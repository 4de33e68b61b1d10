#include <krod/quadrature.hpp>

#include <cmath>

namespace krod {

QuadratureRule gauss_rule(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("quadrature order must be in [1, 16]");
    QuadratureRule rule;
    if (n == 1) {
        rule.points = Vector::Zero(1);
        rule.weights = Vector::Constant(1, 2.0);
        return rule;
    }
    // Symmetric tridiagonal Jacobi matrix of the Legendre recurrence.
    Matrix J = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(J);
    rule.points = eig.eigenvalues();
    rule.weights = 2.0 * eig.eigenvectors().row(0).transpose().array().square();

    // One Newton polish on the Legendre polynomial tightens nodes and weights
    // to full double precision.
    for (int i = 0; i < n; ++i) {
        double x = rule.points(i);
        for (int it = 0; it < 2; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            x -= p1 / dp;
            if (it == 1) rule.weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        rule.points(i) = x;
    }
    // Enforce exact symmetry of the rule.
    for (int i = 0; i < n / 2; ++i) {
        const double x = 0.5 * (rule.points(n - 1 - i) - rule.points(i));
        const double w = 0.5 * (rule.weights(i) + rule.weights(n - 1 - i));
        rule.points(i) = -x;
        rule.points(n - 1 - i) = x;
        rule.weights(i) = w;
        rule.weights(n - 1 - i) = w;
    }
    if (n % 2 == 1) rule.points(n / 2) = 0.0;
    return rule;
}

}  // namespace krod

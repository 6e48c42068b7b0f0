#pragma once

// Reference implementations used only by tests. None of these share code with
// the library paths they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

/// k-th derivative of B-spline basis function i of degree p, evaluated on the
/// polynomial piece of knot span `span` (so span endpoints are well defined).
inline double cox_de_boor(const std::vector<double>& U, int i, int p, int span, double x, int k = 0) {
    if (p == 0) return (k == 0 && i == span) ? 1.0 : 0.0;
    double left = 0.0;
    double right = 0.0;
    const double dl = U[i + p] - U[i];
    const double dr = U[i + p + 1] - U[i + 1];
    if (k == 0) {
        if (dl > 0.0) left = (x - U[i]) / dl * cox_de_boor(U, i, p - 1, span, x, 0);
        if (dr > 0.0) right = (U[i + p + 1] - x) / dr * cox_de_boor(U, i + 1, p - 1, span, x, 0);
        return left + right;
    }
    if (dl > 0.0) left = p / dl * cox_de_boor(U, i, p - 1, span, x, k - 1);
    if (dr > 0.0) right = p / dr * cox_de_boor(U, i + 1, p - 1, span, x, k - 1);
    return left - right;
}

/// Span index k with U[k] <= x < U[k+1] (last nonzero span at the right end).
inline int span_of(const std::vector<double>& U, int p, double x) {
    const int n = static_cast<int>(U.size()) - p - 1;
    if (x >= U[n]) {
        int k = n - 1;
        while (U[k] == U[k + 1]) --k;
        return k;
    }
    int k = p;
    while (!(U[k] <= x && x < U[k + 1])) ++k;
    return k;
}

/// de Casteljau evaluation of a scalar Bezier polynomial with given coefficients.
inline double de_casteljau(std::vector<double> c, double t) {
    for (std::size_t r = 1; r < c.size(); ++r)
        for (std::size_t i = 0; i + r < c.size(); ++i) c[i] = (1.0 - t) * c[i] + t * c[i + 1];
    return c[0];
}

/// Random open knot vector on [0, 1] with interior multiplicities <= max_mult.
inline std::vector<double> random_open_knots(std::mt19937& rng, int p, int interior, int max_mult) {
    std::uniform_real_distribution<double> u(0.02, 0.98);
    std::uniform_int_distribution<int> m(1, max_mult);
    std::vector<double> k(p + 1, 0.0);
    std::vector<double> inner;
    for (int i = 0; i < interior; ++i) {
        const double v = std::round(u(rng) * 1000.0) / 1000.0;
        const int mult = m(rng);
        for (int r = 0; r < mult; ++r) inner.push_back(v);
    }
    std::sort(inner.begin(), inner.end());
    // Collapse accidental duplicates that would exceed max_mult.
    std::vector<double> cleaned;
    for (double v : inner) {
        int count = 0;
        for (double c : cleaned) count += (c == v);
        if (count < max_mult) cleaned.push_back(v);
    }
    k.insert(k.end(), cleaned.begin(), cleaned.end());
    for (int i = 0; i <= p; ++i) k.push_back(1.0);
    return k;
}

/// Central finite difference of a vector-valued function of one variable.
inline Eigen::VectorXd central_difference(const std::function<Eigen::VectorXd(double)>& f, double x,
                                          double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Relative error ||a - b|| / max(||b||, floor).
inline double rel_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor = 1e-300) {
    return (a - b).norm() / std::max(b.norm(), floor);
}

}  // namespace oracle

#include "igashell/splines.hpp"

#include <cmath>
#include <sstream>

namespace igashell::splines {

namespace {

// Bernstein values of degree d for d = 0..p, built by the triangular recurrence.
std::vector<VecX> bernstein_table(int p, double t) {
    std::vector<VecX> rows(p + 1);
    rows[0] = VecX::Ones(1);
    const double s = 1.0 - t;
    for (int d = 1; d <= p; ++d) {
        VecX row = VecX::Zero(d + 1);
        for (int i = 0; i < d; ++i) {
            row[i] += s * rows[d - 1][i];
            row[i + 1] += t * rows[d - 1][i];
        }
        rows[d] = std::move(row);
    }
    return rows;
}

}  // namespace

BernsteinValues bernstein_eval(int p, double t) {
    if (p < 0) throw DomainError("bernstein_eval: negative degree");
    if (!(t >= 0.0 && t <= 1.0)) {
        std::ostringstream msg;
        msg << "bernstein_eval: parameter " << t << " outside [0, 1]";
        throw DomainError(msg.str());
    }
    const auto rows = bernstein_table(p, t);
    BernsteinValues out;
    out.values = rows[p];
    out.d1 = VecX::Zero(p + 1);
    out.d2 = VecX::Zero(p + 1);
    if (p >= 1) {
        const VecX& lower = rows[p - 1];
        for (int i = 0; i <= p; ++i) {
            const double left = i >= 1 ? lower[i - 1] : 0.0;
            const double right = i <= p - 1 ? lower[i] : 0.0;
            out.d1[i] = p * (left - right);
        }
    }
    if (p >= 2) {
        const VecX& lower = rows[p - 2];
        for (int i = 0; i <= p; ++i) {
            const double a = (i >= 2) ? lower[i - 2] : 0.0;
            const double b = (i >= 1 && i - 1 <= p - 2) ? lower[i - 1] : 0.0;
            const double c = (i <= p - 2) ? lower[i] : 0.0;
            out.d2[i] = p * (p - 1) * (a - 2.0 * b + c);
        }
    }
    return out;
}

BezierExtraction bezier_extraction(const KnotVector& kv) {
    const int p = kv.degree();
    const auto& knots = kv.values();
    const int m = static_cast<int>(knots.size());
    // The loop follows the classical one-based formulation.
    auto U = [&](int i) { return knots[i - 1]; };

    BezierExtraction out;
    out.degree = p;
    MatX current = MatX::Identity(p + 1, p + 1);
    std::vector<double> alphas(p + 2, 0.0);
    int a = p + 1;
    int b = a + 1;
    while (b < m) {
        MatX next = MatX::Identity(p + 1, p + 1);
        const int i = b;
        while (b < m && U(b + 1) == U(b)) ++b;
        const int mult = b - i + 1;
        if (mult < p) {
            const double numer = U(b) - U(a);
            for (int j = p; j >= mult + 1; --j) alphas[j - mult] = numer / (U(a + j) - U(a));
            const int r = p - mult;
            for (int j = 1; j <= r; ++j) {
                const int save = r - j + 1;
                const int s = mult + j;
                for (int k = p + 1; k >= s + 1; --k) {
                    const double alpha = alphas[k - s];
                    current.col(k - 1) = alpha * current.col(k - 1) + (1.0 - alpha) * current.col(k - 2);
                }
                if (b < m) {
                    for (int q = 0; q <= j; ++q) next(save - 1 + q, save - 1) = current(p - j + q, p);
                }
            }
        }
        out.operators.push_back(current);
        current = std::move(next);
        if (b < m) {
            a = b;
            ++b;
        }
    }

    out.spans = kv.element_spans();
    if (out.spans.size() != out.operators.size()) {
        throw ValidationError("bezier_extraction: element count mismatch");
    }
    for (int span : out.spans) {
        out.first_function.push_back(span - p);
        out.bounds.push_back({knots[span], knots[span + 1]});
    }
    return out;
}

}  // namespace igashell::splines

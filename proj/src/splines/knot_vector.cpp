#include "igashell/splines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace igashell::splines {

KnotVector::KnotVector(int degree, std::vector<double> values)
    : degree_(degree), values_(std::move(values)) {
    const int p = degree_;
    if (p < 1) {
        throw ValidationError("knot vector: degree must be >= 1, got " + std::to_string(p));
    }
    const int m = static_cast<int>(values_.size());
    if (m < 2 * (p + 1)) {
        throw ValidationError("knot vector: needs at least " + std::to_string(2 * (p + 1)) +
                              " knots for degree " + std::to_string(p) + ", got " +
                              std::to_string(m));
    }
    for (int i = 0; i < m; ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError("knot vector: non-finite knot at index " + std::to_string(i));
        }
        if (i > 0 && values_[i] < values_[i - 1]) {
            throw ValidationError("knot vector: decreasing at index " + std::to_string(i));
        }
    }
    if (!(values_.back() > values_.front())) {
        throw ValidationError("knot vector: empty parametric domain");
    }
    if (multiplicity(values_.front()) != p + 1 || multiplicity(values_.back()) != p + 1) {
        throw ValidationError("knot vector: end knots must be repeated exactly p+1 = " +
                              std::to_string(p + 1) + " times");
    }
    for (int i = p + 1; i < m - p - 1;) {
        int j = i;
        while (j + 1 < m && values_[j + 1] == values_[i]) ++j;
        const int mult = j - i + 1;
        if (mult > p) {
            std::ostringstream msg;
            msg << "knot vector: interior knot " << values_[i] << " has multiplicity " << mult
                << " > degree " << p;
            throw ValidationError(msg.str());
        }
        i = j + 1;
    }
}

KnotVector KnotVector::normalized() const {
    const double a = values_.front();
    const double len = values_.back() - a;
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = (values_[i] - a) / len;
    v.front() = 0.0;
    v.back() = 1.0;
    for (int i = 0; i <= degree_; ++i) {
        v[i] = 0.0;
        v[v.size() - 1 - i] = 1.0;
    }
    return KnotVector(degree_, std::move(v));
}

int KnotVector::multiplicity(double xi) const {
    return static_cast<int>(std::count(values_.begin(), values_.end(), xi));
}

int KnotVector::find_span(double xi) const {
    if (!(xi >= values_.front() && xi <= values_.back())) {
        std::ostringstream msg;
        msg << "parameter " << xi << " outside knot domain [" << values_.front() << ", "
            << values_.back() << "]";
        throw DomainError(msg.str());
    }
    const int n = num_basis();
    if (xi >= values_[n]) {
        // right end: last nonzero span
        int k = n - 1;
        while (values_[k] == values_[k + 1]) --k;
        return k;
    }
    const auto it = std::upper_bound(values_.begin(), values_.end(), xi);
    return static_cast<int>(it - values_.begin()) - 1;
}

std::vector<int> KnotVector::element_spans() const {
    std::vector<int> spans;
    for (int k = degree_; k < num_basis(); ++k) {
        if (values_[k + 1] > values_[k]) spans.push_back(k);
    }
    return spans;
}

std::vector<double> KnotVector::unique_values() const {
    std::vector<double> u = values_;
    u.erase(std::unique(u.begin(), u.end()), u.end());
    return u;
}

}  // namespace igashell::splines

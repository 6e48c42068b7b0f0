#pragma once

// B-spline, Bernstein and NURBS kernels. Everything here is a pure function
// of immutable inputs; patches share their extraction cache between copies.

#include "igashell/common.hpp"

#include <array>
#include <memory>
#include <vector>

namespace igashell::splines {

/// Open (clamped) knot vector of a given degree.
class KnotVector {
public:
    /// Throws ValidationError unless the sequence is nondecreasing, clamped
    /// with end multiplicity exactly p+1 and interior multiplicities <= p.
    KnotVector(int degree, std::vector<double> values);

    int degree() const { return degree_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    int num_basis() const { return static_cast<int>(values_.size()) - degree_ - 1; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }

    /// Affinely mapped onto [0, 1].
    KnotVector normalized() const;

    int multiplicity(double xi) const;

    /// Knot index k with values[k] <= xi < values[k+1]; the right end of the
    /// domain maps to the last nonzero span.
    int find_span(double xi) const;

    /// Starting knot index of every nonzero span, in increasing order.
    std::vector<int> element_spans() const;

    std::vector<double> unique_values() const;

private:
    int degree_;
    std::vector<double> values_;
};

struct BernsteinValues {
    VecX values;
    VecX d1;
    VecX d2;
};

/// Bernstein polynomials of degree p on [0, 1] and their first two derivatives.
BernsteinValues bernstein_eval(int p, double t);

/// Per-element extraction operators of a univariate knot vector: on element e
/// the nonzero B-splines satisfy N = operators[e] * B.
struct BezierExtraction {
    int degree = 0;
    std::vector<MatX> operators;
    std::vector<int> spans;            ///< starting knot index of each element
    std::vector<int> first_function;   ///< global index of the first local function
    std::vector<std::array<double, 2>> bounds;

    std::size_t num_elements() const { return operators.size(); }
};

BezierExtraction bezier_extraction(const KnotVector& kv);

/// One Bezier element of a tensor-product patch.
struct BezierElement {
    int index = 0;
    std::array<int, 2> span_index{};            ///< element position per direction
    std::array<double, 2> lower{};
    std::array<double, 2> upper{};
    std::vector<int> connectivity;              ///< patch-local control point ids, i fastest
    MatX extraction;                            ///< Kronecker product of the two 1D operators
};

/// Tensor-product NURBS surface with thickness. Control point (i, j) is stored
/// at index i + n1 * j. Knot vectors are normalized to [0, 1] on construction.
class NurbsPatch {
public:
    NurbsPatch(KnotVector kv1, KnotVector kv2, std::vector<Vec3> points,
               std::vector<double> weights, double thickness);

    int degree(int dir) const { return knots_[dir].degree(); }
    const KnotVector& knots(int dir) const { return knots_[dir]; }
    int num_points(int dir) const { return knots_[dir].num_basis(); }
    int num_points() const { return num_points(0) * num_points(1); }
    int point_index(int i, int j) const { return i + num_points(0) * j; }

    const std::vector<Vec3>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    double thickness() const { return thickness_; }

    const std::vector<BezierElement>& elements() const { return cache_->elements; }
    std::size_t num_elements() const { return cache_->elements.size(); }
    const BezierExtraction& extraction(int dir) const { return cache_->extraction[dir]; }

    /// Element containing (xi1, xi2); boundaries resolve to the upper element
    /// except at the end of the domain.
    int find_element(double xi1, double xi2) const;

private:
    struct Cache {
        std::array<BezierExtraction, 2> extraction;
        std::vector<BezierElement> elements;
    };

    std::array<KnotVector, 2> knots_;
    std::vector<Vec3> points_;
    std::vector<double> weights_;
    double thickness_;
    std::shared_ptr<const Cache> cache_;
};

/// Rational basis of one element at a parametric point. Rows follow the
/// element connectivity; second derivative columns are (11, 22, 12).
struct BasisEvaluation {
    VecX values;
    Eigen::Matrix<double, Eigen::Dynamic, 2> d1;
    Eigen::Matrix<double, Eigen::Dynamic, 3> d2;

    Eigen::Index size() const { return values.size(); }
};

/// Evaluates the rational basis through the extraction operator with the
/// quotient-rule expressions in weighted Bernstein form. Derivatives are taken
/// with respect to the normalized patch parameters.
BasisEvaluation nurbs_basis_eval(const NurbsPatch& patch, int element, const Vec2& xi);

Vec3 surface_point(const NurbsPatch& patch, double xi1, double xi2);

/// Inserts xi once into the knot vector of direction dir; geometry unchanged.
NurbsPatch insert_knot(const NurbsPatch& patch, int dir, double xi);

/// Raises the degree of a direction that consists of a single Bezier span.
NurbsPatch elevate_degree(const NurbsPatch& patch, int dir);

/// Splits every nonzero span into `parts[dir]` equal pieces by knot insertion.
NurbsPatch refine_uniform(const NurbsPatch& patch, int parts1, int parts2);

}  // namespace igashell::splines

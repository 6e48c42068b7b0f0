#pragma once

// Small geometries shared by several test binaries.

#include "igashell/splines.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

namespace fixture {

using igashell::Vec3;
using igashell::splines::KnotVector;
using igashell::splines::NurbsPatch;

inline NurbsPatch quarter_cylinder(double R, double H) {
    const double s = std::sqrt(0.5);
    KnotVector kv1(2, {0, 0, 0, 1, 1, 1});
    KnotVector kv2(1, {0, 0, 1, 1});
    std::vector<Vec3> pts;
    std::vector<double> w;
    for (double z : {0.0, H}) {
        pts.emplace_back(R, 0, z);
        pts.emplace_back(R, R, z);
        pts.emplace_back(0, R, z);
        w.insert(w.end(), {1.0, s, 1.0});
    }
    return NurbsPatch(kv1, kv2, pts, w, 0.1);
}

inline NurbsPatch random_patch(std::mt19937& rng, int p, int q) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> wd(0.5, 2.0);
    KnotVector kv1(p, oracle::random_open_knots(rng, p, 3, p - 1));
    KnotVector kv2(q, oracle::random_open_knots(rng, q, 2, q - 1));
    const int n1 = kv1.num_basis();
    const int n2 = kv2.num_basis();
    std::vector<Vec3> pts;
    std::vector<double> w;
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            pts.emplace_back(i + 0.3 * u(rng), j + 0.3 * u(rng), 0.5 * u(rng));
            w.push_back(wd(rng));
        }
    return NurbsPatch(kv1, kv2, pts, w, 0.1);
}

/// Flat rectangle [0, a] x [0, b] with degree p in both directions and n elements per side.
inline NurbsPatch flat_plate(double a, double b, int p, int n, double thickness = 0.1) {
    std::vector<double> k(p + 1, 0.0);
    k.insert(k.end(), p + 1, 1.0);
    KnotVector kv(p, k);
    std::vector<Vec3> pts;
    std::vector<double> w;
    for (int j = 0; j <= p; ++j)
        for (int i = 0; i <= p; ++i) {
            pts.emplace_back(a * i / p, b * j / p, 0.0);
            w.push_back(1.0);
        }
    return igashell::splines::refine_uniform(NurbsPatch(kv, kv, pts, w, thickness), n, n);
}

}  // namespace fixture

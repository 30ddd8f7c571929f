#include "resist/distance.hpp"

#include <algorithm>
#include <cmath>

namespace resist {

double point_segment_distance(const Vec3& p, const Segment3& s) {
    const Vec3 d = s.b - s.a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return (p - s.a).norm();
    const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
    return (p - (s.a + t * d)).norm();
}

double segment_segment_distance(const Segment3& s, const Segment3& t) {
    // Closest points of two segments, clamped quadratic minimization.
    const Vec3 d1 = s.b - s.a, d2 = t.b - t.a, r = s.a - t.a;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    double u = 0.0, v = 0.0;
    if (a == 0.0 && e == 0.0) return r.norm();
    if (a == 0.0) {
        v = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e == 0.0) {
            u = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double den = a * e - b * b;
            u = den > 0.0 ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0.0;
            v = (b * u + f) / e;
            if (v < 0.0) {
                v = 0.0;
                u = std::clamp(-c / a, 0.0, 1.0);
            } else if (v > 1.0) {
                v = 1.0;
                u = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    return ((s.a + u * d1) - (t.a + v * d2)).norm();
}

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = (b - a).cross(c - a);
    const double n2 = n.squaredNorm();
    if (n2 > 0.0) {
        // Projection inside the triangle: plane distance is the answer.
        const Vec3 q = p - n * (n.dot(p - a) / n2);
        const double w0 = (b - q).cross(c - q).dot(n);
        const double w1 = (c - q).cross(a - q).dot(n);
        const double w2 = (a - q).cross(b - q).dot(n);
        if (w0 >= 0 && w1 >= 0 && w2 >= 0) return (p - q).norm();
    }
    return std::min({point_segment_distance(p, {a, b}), point_segment_distance(p, {b, c}),
                     point_segment_distance(p, {c, a})});
}

double segment_triangle_distance(const Segment3& s, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = (b - a).cross(c - a);
    const double n2 = n.squaredNorm();
    if (n2 > 0.0) {
        // A transversal crossing with the hit point inside the triangle is a
        // genuine intersection.
        const double da = n.dot(s.a - a), db = n.dot(s.b - a);
        if ((da <= 0 && db >= 0) || (da >= 0 && db <= 0)) {
            const double den = da - db;
            if (std::abs(den) > 0.0) {
                const Vec3 q = s.a + (da / den) * (s.b - s.a);
                const double w0 = (b - q).cross(c - q).dot(n);
                const double w1 = (c - q).cross(a - q).dot(n);
                const double w2 = (a - q).cross(b - q).dot(n);
                if (w0 >= 0 && w1 >= 0 && w2 >= 0) return 0.0;
            }
        }
    }
    double d = std::min(point_triangle_distance(s.a, a, b, c), point_triangle_distance(s.b, a, b, c));
    d = std::min(d, segment_segment_distance(s, {a, b}));
    d = std::min(d, segment_segment_distance(s, {b, c}));
    d = std::min(d, segment_segment_distance(s, {c, a}));
    return d;
}

}  // namespace resist

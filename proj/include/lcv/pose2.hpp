/* pose2.hpp -- SE(2) group operations on planar poses. */

#ifndef LCV_POSE2_HPP
#define LCV_POSE2_HPP

#include <cmath>

namespace lcv {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/* Maps any finite angle into (-pi, pi]. Idempotent. */
inline double normalize_angle(double a) {
    a = std::remainder(a, 2.0 * kPi);
    if (a <= -kPi)
        a += 2.0 * kPi;
    return a;
}

/* A planar pose (x, y, theta) in meters/radians, theta kept in (-pi, pi]. */
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    Pose2() = default;
    Pose2(double x_, double y_, double theta_)
        : x(x_), y(y_), theta(normalize_angle(theta_)) {}

    static Pose2 identity() { return Pose2{}; }

    bool operator==(const Pose2& o) const {
        return x == o.x && y == o.y && theta == o.theta;
    }
};

/* Group product: b expressed in a's frame, mapped into the world frame. */
inline Pose2 compose(const Pose2& a, const Pose2& b) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    return Pose2(a.x + c * b.x - s * b.y,
                 a.y + s * b.x + c * b.y,
                 a.theta + b.theta);
}

inline Pose2 inverse(const Pose2& a) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    return Pose2(-c * a.x - s * a.y,
                 s * a.x - c * a.y,
                 -a.theta);
}

/* Transform from a to b: compose(a, relative(a, b)) == b. */
inline Pose2 relative(const Pose2& a, const Pose2& b) {
    return compose(inverse(a), b);
}

/* Euclidean distance over (x, y) only; headings ignored. */
inline double planar_distance(const Pose2& a, const Pose2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace lcv

#endif  // LCV_POSE2_HPP

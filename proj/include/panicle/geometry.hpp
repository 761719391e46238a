#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <cmath>
#include <optional>

#include "panicle/common.hpp"

namespace panicle {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Quat = Eigen::Quaterniond;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Rigid body motion in SE(3), stored as unit quaternion + translation.
/// Quaternion storage avoids the renormalization drift a matrix chain
/// accumulates over many pose-graph iterations; matrices are produced on
/// demand.
struct RigidTransform {
    Quat rotation{1.0, 0.0, 0.0, 0.0};  // w, x, y, z
    Vec3 translation{0.0, 0.0, 0.0};

    static RigidTransform identity() { return {}; }

    Vec3 operator()(const Vec3& p) const { return rotation * p + translation; }

    Mat4 matrix() const {
        Mat4 m = Mat4::Identity();
        m.topLeftCorner<3, 3>() = rotation.toRotationMatrix();
        m.topRightCorner<3, 1>() = translation;
        return m;
    }
};

inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
    RigidTransform out;
    out.rotation = (a.rotation * b.rotation).normalized();
    out.translation = a.rotation * b.translation + a.translation;
    return out;
}

inline RigidTransform invert(const RigidTransform& t) {
    RigidTransform out;
    out.rotation = t.rotation.conjugate().normalized();
    out.translation = -(out.rotation * t.translation);
    return out;
}

/// Rotation angle of t in [0, pi].
inline double rotation_angle(const RigidTransform& t) {
    Quat q = t.rotation;
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    return 2.0 * std::atan2(q.vec().norm(), q.w());
}

/// Relative rotation angle between a and b, in [0, pi].
inline double rotation_distance(const RigidTransform& a, const RigidTransform& b) {
    RigidTransform rel = compose(invert(a), b);
    return rotation_angle(rel);
}

/// Translation lerp + constant-speed rotation slerp. t=0 gives a, t=1 gives b
/// exactly. Antipodal rotations (relative angle pi) have no unique geodesic
/// and raise an error.
inline RigidTransform interpolate_pose(const RigidTransform& a, const RigidTransform& b, double t) {
    double dot = a.rotation.dot(b.rotation);
    Quat qb = b.rotation;
    if (dot < 0.0) {
        qb.coeffs() = -qb.coeffs();
        dot = -dot;
    }
    if (dot < 1e-9) throw Error("interpolate_pose: antipodal rotations, geodesic is ambiguous");

    RigidTransform out;
    out.translation = (1.0 - t) * a.translation + t * b.translation;
    if (dot > 1.0 - 1e-12) {
        // numerically parallel; nlerp is exact to machine precision here
        Quat q;
        q.coeffs() = (1.0 - t) * a.rotation.coeffs() + t * qb.coeffs();
        out.rotation = q.normalized();
    } else {
        const double half = std::acos(std::min(dot, 1.0));
        const double s = std::sin(half);
        const double wa = std::sin((1.0 - t) * half) / s;
        const double wb = std::sin(t * half) / s;
        Quat q;
        q.coeffs() = wa * a.rotation.coeffs() + wb * qb.coeffs();
        out.rotation = q.normalized();
    }
    return out;
}

/// Pinhole camera parameters. Pixels are indexed by their centers; u grows
/// with +x, v with +y, the optical axis is +z.
struct CameraIntrinsics {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;

    void validate() const {
        if (!(fx > 0.0) || !(fy > 0.0)) throw Error("intrinsics: focal lengths must be positive");
        if (!(cx >= 0.0 && cx < width)) throw Error("intrinsics: cx out of image bounds");
        if (!(cy >= 0.0 && cy < height)) throw Error("intrinsics: cy out of image bounds");
    }
};

/// Projects a camera-frame point; requires z > 0.
inline Vec2 project(const Vec3& point, const CameraIntrinsics& k) {
    if (!(point.z() > 0.0)) throw Error("project: point behind camera (z <= 0)");
    return {k.fx * point.x() / point.z() + k.cx, k.fy * point.y() / point.z() + k.cy};
}

/// Back-projects pixel (u, v) at the given depth (z, meters) to a
/// camera-frame point.
inline Vec3 backproject(const Vec2& uv, double depth, const CameraIntrinsics& k) {
    return {(uv.x() - k.cx) / k.fx * depth, (uv.y() - k.cy) / k.fy * depth, depth};
}

/// Nearest-pixel coordinates of a projected point, or no value when the point
/// is behind the camera or lands outside the image.
inline std::optional<Eigen::Vector2i> project_to_pixel(const Vec3& point, const CameraIntrinsics& k) {
    if (!(point.z() > 0.0)) return std::nullopt;
    const Vec2 uv = project(point, k);
    const int u = static_cast<int>(std::lround(uv.x()));
    const int v = static_cast<int>(std::lround(uv.y()));
    if (u < 0 || u >= k.width || v < 0 || v >= k.height) return std::nullopt;
    return Eigen::Vector2i{u, v};
}

/// Element of se(3): rotation vector omega (radians) and translation part v.
struct Se3Tangent {
    Vec3 omega{0.0, 0.0, 0.0};
    Vec3 v{0.0, 0.0, 0.0};

    Vec6 vector() const {
        Vec6 out;
        out << omega, v;
        return out;
    }
    static Se3Tangent from_vector(const Vec6& x) { return {x.head<3>(), x.tail<3>()}; }
};

inline Mat3 skew(const Vec3& w) {
    Mat3 m;
    m << 0.0, -w.z(), w.y(), w.z(), 0.0, -w.x(), -w.y(), w.x(), 0.0;
    return m;
}

inline RigidTransform exp_se3(const Se3Tangent& t) {
    const double theta = t.omega.norm();
    const Mat3 w = skew(t.omega);
    double a, b, c;  // coefficients of I, W, W^2 in the V matrix; a for sin/theta
    if (theta < 1e-6) {
        const double t2 = theta * theta;
        a = 1.0 - t2 / 6.0;
        b = 0.5 - t2 / 24.0;
        c = 1.0 / 6.0 - t2 / 120.0;
    } else {
        a = std::sin(theta) / theta;
        b = (1.0 - std::cos(theta)) / (theta * theta);
        c = (theta - std::sin(theta)) / (theta * theta * theta);
    }
    const Mat3 rot = Mat3::Identity() + a * w + b * w * w;
    const Mat3 v_mat = Mat3::Identity() + b * w + c * w * w;

    RigidTransform out;
    out.rotation = Quat(rot).normalized();
    out.translation = v_mat * t.v;
    return out;
}

inline Se3Tangent log_se3(const RigidTransform& t) {
    Quat q = t.rotation.normalized();
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    const Eigen::AngleAxisd aa(q);
    const double theta = aa.angle();
    if (theta >= M_PI) throw Error("log_se3: rotation angle >= pi has no unique logarithm");

    Se3Tangent out;
    out.omega = theta * aa.axis();
    const Mat3 w = skew(out.omega);
    double b;  // coefficient of W^2 in V^{-1}
    if (theta < 1e-6) {
        b = 1.0 / 12.0 + theta * theta / 720.0;
    } else {
        b = 1.0 / (theta * theta) - (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
    }
    const Mat3 v_inv = Mat3::Identity() - 0.5 * w + b * w * w;
    out.v = v_inv * t.translation;
    return out;
}

}  // namespace panicle

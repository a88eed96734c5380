#ifndef TAXELGRAPH_GEOMETRY_HPP
#define TAXELGRAPH_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace taxelgraph {

using Vec3 = Eigen::Vector3d;

/// Rigid transform (proper rotation + translation): p' = R p + t.
struct RigidTransform {
    Eigen::Quaterniond rotation{1.0, 0.0, 0.0, 0.0};
    Vec3 translation{0.0, 0.0, 0.0};

    static RigidTransform identity() { return {}; }

    RigidTransform operator*(const RigidTransform& other) const {
        RigidTransform out;
        out.rotation = (rotation * other.rotation).normalized();
        out.translation = rotation * other.translation + translation;
        return out;
    }

    Vec3 apply_point(const Vec3& p) const { return rotation * p + translation; }

    /// Rotates a direction (normals, axes); translation does not apply.
    Vec3 apply_direction(const Vec3& d) const { return rotation * d; }

    RigidTransform inverse() const {
        RigidTransform out;
        out.rotation = rotation.conjugate();
        out.translation = -(out.rotation * translation);
        return out;
    }
};

/// Rotation-only transform about a unit axis through the origin.
inline RigidTransform axis_angle(const Vec3& unit_axis, double angle) {
    RigidTransform out;
    out.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(angle, unit_axis));
    return out;
}

inline RigidTransform translate(const Vec3& t) {
    RigidTransform out;
    out.translation = t;
    return out;
}

inline RigidTransform rigid_from(const Eigen::Quaterniond& q, const Vec3& t) {
    RigidTransform out;
    out.rotation = q.normalized();
    out.translation = t;
    return out;
}

} // namespace taxelgraph

#endif

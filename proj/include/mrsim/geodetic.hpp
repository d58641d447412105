#pragma once

#include <utility>

namespace mrsim {

inline constexpr double kEarthRadiusM = 6371000.0;

/// Geodetic anchor of the simulation world plus the local magnetic field
/// description (declination, inclination, total strength).
struct GeoOrigin {
    double latitude_deg{47.3977};
    double longitude_deg{8.5456};
    double altitude_m{488.0};       // MSL altitude of the world origin
    double declination_rad{0.0};
    double inclination_rad{0.0};
    double strength_gauss{0.45};

    void validate() const;
};

/// Inverse azimuthal equidistant projection on a spherical Earth. Takes local
/// tangent-plane offsets in meters (x east, y north) and returns latitude and
/// longitude in degrees. Offsets are limited to 500 km from the origin.
std::pair<double, double> local_to_geodetic(double x_east_m, double y_north_m,
                                            const GeoOrigin& origin);

} // namespace mrsim

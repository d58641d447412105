#include "mrsim/geodetic.hpp"

#include <cmath>

#include "mrsim/error.hpp"

namespace mrsim {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
constexpr double kRadToDeg = 180.0 / M_PI;
constexpr double kMaxRangeM = 500e3;
} // namespace

void GeoOrigin::validate() const {
    if (!(std::abs(latitude_deg) <= 90.0))
        throw_config("origin latitude out of [-90, 90]");
    if (!(std::abs(longitude_deg) <= 180.0))
        throw_config("origin longitude out of [-180, 180]");
    if (!std::isfinite(altitude_m)) throw_config("origin altitude must be finite");
    if (!std::isfinite(declination_rad) || !std::isfinite(inclination_rad) ||
        !std::isfinite(strength_gauss))
        throw_config("magnetic field parameters must be finite");
}

std::pair<double, double> local_to_geodetic(double x_east_m, double y_north_m,
                                            const GeoOrigin& origin) {
    if (!std::isfinite(x_east_m) || !std::isfinite(y_north_m))
        throw_invalid("local_to_geodetic: non-finite offset");

    const double rho = std::hypot(x_east_m, y_north_m);
    if (rho >= kMaxRangeM)
        throw_invalid("local_to_geodetic: offset exceeds 500 km validity range");
    if (rho == 0.0) return {origin.latitude_deg, origin.longitude_deg};

    const double lat0 = origin.latitude_deg * kDegToRad;
    const double lon0 = origin.longitude_deg * kDegToRad;
    const double c = rho / kEarthRadiusM;   // angular distance from the origin
    const double sin_c = std::sin(c);
    const double cos_c = std::cos(c);

    const double lat = std::asin(cos_c * std::sin(lat0) +
                                 y_north_m * sin_c * std::cos(lat0) / rho);
    const double lon =
        lon0 + std::atan2(x_east_m * sin_c,
                          rho * std::cos(lat0) * cos_c - y_north_m * std::sin(lat0) * sin_c);

    return {lat * kRadToDeg, lon * kRadToDeg};
}

} // namespace mrsim

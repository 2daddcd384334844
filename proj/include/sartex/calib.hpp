#pragma once

#include "sartex/raster.hpp"

namespace sartex::calib {

/// Scalar calibration inputs for one raster.
struct CalibrationParams {
  double k_db = 0.0;               ///< calibration constant K, dB
  double incidence_angle_deg = 0.0; ///< incidence angle, must lie in [0, 90)
};

/// sigma0_dB = 10 log10(DN^2) + K for every pixel. Requires stage DN and
/// every DN > 0; the first offending pixel index is reported otherwise.
Raster to_sigma0(const Raster& dn, double k_db);

/// Incidence-angle normalization applied in linear power:
/// gamma0_dB = sigma0_dB - 10 log10(cos phi).
Raster to_gamma0(const Raster& sigma0, double incidence_angle_deg);

/// DN -> sigma0 -> gamma0.
Raster calibrate(const Raster& dn, const CalibrationParams& params);

namespace serial {
// Single-threaded references for the per-pixel kernels above.
Raster to_sigma0(const Raster& dn, double k_db);
Raster to_gamma0(const Raster& sigma0, double incidence_angle_deg);
}  // namespace serial

}  // namespace sartex::calib

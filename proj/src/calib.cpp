#include "sartex/calib.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sartex/error.hpp"

namespace sartex::calib {

namespace {

Error calib_error(const std::string& message) {
  return Error(ErrorKind::Domain, "calib", message);
}

void check_dn(const Raster& dn) {
  if (dn.stage() != Stage::DN) {
    throw calib_error("sigma0 needs a DN raster, got stage " + std::string(to_string(dn.stage())));
  }
  const auto& px = dn.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (!(px[i] > 0.0f)) {
      throw calib_error("DN must be > 0, pixel " + std::to_string(i) + " is " +
                        std::to_string(px[i]));
    }
  }
}

double gamma_offset_db(const Raster& sigma0, double phi_deg) {
  if (sigma0.stage() != Stage::Sigma0Db) {
    throw calib_error("gamma0 needs a SIGMA0_DB raster, got stage " +
                      std::string(to_string(sigma0.stage())));
  }
  if (!(phi_deg >= 0.0 && phi_deg < 90.0)) {
    throw calib_error("incidence angle must lie in [0, 90) degrees, got " +
                      std::to_string(phi_deg));
  }
  return -10.0 * std::log10(std::cos(phi_deg * std::numbers::pi / 180.0));
}

inline float sigma0_of(float dn, double k_db) {
  const double d = dn;
  return static_cast<float>(10.0 * std::log10(d * d) + k_db);
}

}  // namespace

Raster to_sigma0(const Raster& dn, double k_db) {
  check_dn(dn);
  const auto& in = dn.pixels();
  std::vector<float> out(in.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = sigma0_of(in[i], k_db);
  return dn.with_pixels(std::move(out), Stage::Sigma0Db);
}

Raster to_gamma0(const Raster& sigma0, double incidence_angle_deg) {
  const double offset = gamma_offset_db(sigma0, incidence_angle_deg);
  const auto& in = sigma0.pixels();
  std::vector<float> out(in.size());
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = static_cast<float>(in[i] + offset);
  return sigma0.with_pixels(std::move(out), Stage::Gamma0Db);
}

Raster calibrate(const Raster& dn, const CalibrationParams& params) {
  return to_gamma0(to_sigma0(dn, params.k_db), params.incidence_angle_deg);
}

namespace serial {

Raster to_sigma0(const Raster& dn, double k_db) {
  check_dn(dn);
  std::vector<float> out;
  out.reserve(dn.size());
  for (float v : dn.pixels()) out.push_back(sigma0_of(v, k_db));
  return dn.with_pixels(std::move(out), Stage::Sigma0Db);
}

Raster to_gamma0(const Raster& sigma0, double incidence_angle_deg) {
  const double offset = gamma_offset_db(sigma0, incidence_angle_deg);
  std::vector<float> out;
  out.reserve(sigma0.size());
  for (float v : sigma0.pixels()) out.push_back(static_cast<float>(v + offset));
  return sigma0.with_pixels(std::move(out), Stage::Gamma0Db);
}

}  // namespace serial

}  // namespace sartex::calib

#include "tapgp/tap_env.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tapgp {

HeightField wave_block() {
  HeightField f;
  f.name = "wave";
  f.description = "wave 16x6x11cm h(u)=7+4*sin(2*pi*u/8)";
  f.length_cm = 16.0;
  f.width_cm = 6.0;
  f.height_cm = 11.0;
  f.profile = [](double u, double /*v*/) { return 7.0 + 4.0 * std::sin(2.0 * std::numbers::pi * u / 8.0); };
  return f;
}

HeightField slope_block() {
  HeightField f;
  f.name = "slope";
  f.description = "slope 17x6x8cm h(u)=8*u/17";
  f.length_cm = 17.0;
  f.width_cm = 6.0;
  f.height_cm = 8.0;
  f.profile = [](double u, double /*v*/) { return 8.0 * u / 17.0; };
  return f;
}

HeightField object_by_name(const std::string& name) {
  if (name == "wave") {
    return wave_block();
  }
  if (name == "slope") {
    return slope_block();
  }
  throw std::invalid_argument("unknown object '" + name + "' (expected wave or slope)");
}

Scene::Scene(HeightField object, Options options) : object_(std::move(object)), opts_(options) {
  if (!(opts_.area_x_cm > 0.0 && opts_.area_y_cm > 0.0)) {
    throw std::invalid_argument("search area must have positive side lengths");
  }
  if (!(opts_.height_scale_cm > 0.0)) {
    throw std::invalid_argument("height_scale_cm must be positive");
  }
  if (!(opts_.noise_sd_cm >= 0.0)) {
    throw std::invalid_argument("noise_sd_cm must be non-negative");
  }
  if (opts_.placement_x_cm < 0.0 || opts_.placement_y_cm < 0.0 ||
      opts_.placement_x_cm + object_.length_cm > opts_.area_x_cm + 1e-12 ||
      opts_.placement_y_cm + object_.width_cm > opts_.area_y_cm + 1e-12) {
    throw std::invalid_argument("object footprint does not fit inside the search area");
  }
}

bool Scene::on_footprint_cm(double x_cm, double y_cm) const {
  const double u = x_cm - opts_.placement_x_cm;
  const double v = y_cm - opts_.placement_y_cm;
  return u >= 0.0 && u <= object_.length_cm && v >= 0.0 && v <= object_.width_cm;
}

bool Scene::on_footprint(const Point2& pos) const { return on_footprint_cm(to_cm_x(pos.x), to_cm_y(pos.y)); }

double Scene::true_height_cm(const Point2& pos) const {
  const double x = to_cm_x(pos.x);
  const double y = to_cm_y(pos.y);
  if (!on_footprint_cm(x, y)) {
    return opts_.desk_height_cm;
  }
  return opts_.desk_height_cm + object_.height_at(x - opts_.placement_x_cm, y - opts_.placement_y_cm);
}

TapResult Scene::tap(const Point2& pos) const {
  if (!(pos.x >= 0.0 && pos.x <= 1.0 && pos.y >= 0.0 && pos.y <= 1.0)) {
    throw OutOfArea("tap position (" + std::to_string(pos.x) + ", " + std::to_string(pos.y) +
                    ") outside the search area");
  }
  TapResult r;
  r.on_surface = on_footprint(pos);
  r.raw_height_cm = true_height_cm(pos);
  r.height = r.raw_height_cm / opts_.height_scale_cm;
  return r;
}

TapResult Scene::tap(const Point2& pos, std::mt19937_64& rng) const {
  TapResult r = tap(pos);
  if (r.on_surface && opts_.noise_sd_cm > 0.0) {
    std::normal_distribution<double> noise(0.0, opts_.noise_sd_cm);
    r.raw_height_cm += noise(rng);
    r.height = r.raw_height_cm / opts_.height_scale_cm;
  }
  return r;
}

std::string Scene::describe() const {
  std::ostringstream os;
  os.precision(9);
  os << object_.description << "; area=" << opts_.area_x_cm << "x" << opts_.area_y_cm
     << "cm; placement=(" << opts_.placement_x_cm << "," << opts_.placement_y_cm
     << ")cm; desk=" << opts_.desk_height_cm << "cm; height_scale=" << opts_.height_scale_cm
     << "cm; noise_sd=" << opts_.noise_sd_cm << "cm";
  return os.str();
}

std::uint64_t Scene::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : describe()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace tapgp

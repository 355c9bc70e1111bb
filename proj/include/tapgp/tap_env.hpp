#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>

#include "tapgp/gp.hpp"

namespace tapgp {

/// Ground-truth object: a rectangular footprint with a height profile.
///
/// `profile(u, v)` gives the height in cm at local coordinates
/// u in [0, length_cm] and v in [0, width_cm]. `description` names the
/// profile formula and feeds the scene hash.
struct HeightField {
  std::string name;
  std::string description;
  double length_cm = 0.0;
  double width_cm = 0.0;
  double height_cm = 0.0;
  std::function<double(double u, double v)> profile;

  [[nodiscard]] double height_at(double u, double v) const { return profile(u, v); }
};

/// 16 x 6 cm block with h(u) = 7 + 4 sin(2 pi u / 8): two periods between 3 and 11 cm.
[[nodiscard]] HeightField wave_block();

/// 17 x 6 cm ramp h(u) = 8 u / 17.
[[nodiscard]] HeightField slope_block();

[[nodiscard]] HeightField object_by_name(const std::string& name);

struct TapResult {
  double height = 0.0;
  bool on_surface = false;
  double raw_height_cm = 0.0;
};

class OutOfArea : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Object placed inside the search area on a flat desk.
class Scene {
 public:
  struct Options {
    double area_x_cm = 23.0;
    double area_y_cm = 23.0;
    double placement_x_cm = 5.0;
    double placement_y_cm = 8.5;
    double desk_height_cm = 0.0;
    double height_scale_cm = 15.0;
    double noise_sd_cm = 0.0;
  };

  /// Throws std::invalid_argument if the footprint does not fit in the area.
  Scene(HeightField object, Options options);

  [[nodiscard]] const HeightField& object() const { return object_; }
  [[nodiscard]] const Options& options() const { return opts_; }

  [[nodiscard]] double to_cm_x(double x_norm) const { return x_norm * opts_.area_x_cm; }
  [[nodiscard]] double to_cm_y(double y_norm) const { return y_norm * opts_.area_y_cm; }

  /// Closed-rectangle footprint test in cm.
  [[nodiscard]] bool on_footprint_cm(double x_cm, double y_cm) const;
  [[nodiscard]] bool on_footprint(const Point2& pos) const;

  /// Ground-truth height in cm (desk height off the footprint).
  [[nodiscard]] double true_height_cm(const Point2& pos) const;

  /// Noise-free tap. Throws OutOfArea when pos is outside [0,1]^2.
  [[nodiscard]] TapResult tap(const Point2& pos) const;

  /// Tap with optional Gaussian height noise on contacts (noise_sd_cm > 0).
  [[nodiscard]] TapResult tap(const Point2& pos, std::mt19937_64& rng) const;

  /// Human-readable scene description including the profile formula.
  [[nodiscard]] std::string describe() const;
  /// FNV-1a 64 of describe().
  [[nodiscard]] std::uint64_t hash() const;

 private:
  HeightField object_;
  Options opts_;
};

}  // namespace tapgp

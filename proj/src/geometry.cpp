#include "vltrack/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vltrack/errors.hpp"
#include "vltrack/strings.hpp"

namespace vltrack {

bool is_valid(const BoundingBox& box) {
  return std::isfinite(box.x) && std::isfinite(box.y) && std::isfinite(box.w) &&
         std::isfinite(box.h) && box.w >= 0.0 && box.h >= 0.0;
}

void validate(const BoundingBox& box, const std::string& what) {
  if (!is_valid(box)) {
    throw GeometryError("invalid geometry: " + what + " = [" + to_string(box) +
                        "] must be finite with non-negative extents");
  }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  validate(a, "first box");
  validate(b, "second box");
  const double iw = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
  const double ih = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
  const double intersection = iw * ih;
  // Areas go through the same edge arithmetic as the intersection so that
  // rounding cancels: iou(a,a) is exactly 1 and intersection <= min(area).
  const double area_a = ((a.x + a.w) - a.x) * ((a.y + a.h) - a.y);
  const double area_b = ((b.x + b.w) - b.x) * ((b.y + b.h) - b.y);
  const double uni = area_a + area_b - intersection;
  if (uni <= 0.0) {
    return 0.0;
  }
  return intersection / uni;
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  validate(a, "first box");
  validate(b, "second box");
  return std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
}

double normalized_center_distance(const BoundingBox& pred, const BoundingBox& gt) {
  validate(pred, "prediction");
  validate(gt, "ground truth");
  if (gt.w <= 0.0 || gt.h <= 0.0) {
    throw DegenerateGtError("degenerate ground truth: [" + to_string(gt) +
                            "] has zero extent; cannot normalize center offset");
  }
  const double dx = (pred.center_x() - gt.center_x()) / gt.w;
  const double dy = (pred.center_y() - gt.center_y()) / gt.h;
  return std::hypot(dx, dy);
}

std::string to_string(const BoundingBox& box) {
  return format_real(box.x) + "," + format_real(box.y) + "," + format_real(box.w) + "," +
         format_real(box.h);
}

BoundingBox parse_box(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw ValidationError("expected box as x,y,w,h, got '" + std::string(text) + "'");
  }
  double values[4];
  for (int i = 0; i < 4; ++i) {
    const auto value = parse_real(parts[i]);
    if (!value) {
      throw ValidationError("malformed box number '" + std::string(parts[i]) + "'");
    }
    values[i] = *value;
  }
  const BoundingBox box{values[0], values[1], values[2], values[3]};
  if (!is_valid(box)) {
    throw ValidationError("box [" + std::string(text) + "] must be finite with non-negative extents");
  }
  return box;
}

}  // namespace vltrack

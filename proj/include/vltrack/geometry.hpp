#pragma once

#include <string>

namespace vltrack {

/// Axis-aligned rectangle in pixel units, stored as (left, top, width, height)
/// in continuous coordinates. Zero-area boxes are legal (absent-frame
/// placeholders); negative extents and non-finite values are not.
struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double center_x() const { return x + w / 2.0; }
  double center_y() const { return y + h / 2.0; }

  bool operator==(const BoundingBox& other) const = default;
};

/// True iff all fields are finite and extents are non-negative.
bool is_valid(const BoundingBox& box);

/// Throws GeometryError when the box violates its invariants. `what` names the
/// offending argument in the message.
void validate(const BoundingBox& box, const std::string& what = "box");

/// Intersection-over-union of two boxes. The intersection uses half-open
/// interval overlap max(0, min(r1,r2) - max(l1,l2)); a zero-area union yields 0.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Euclidean distance between box centers, in pixels.
double center_distance(const BoundingBox& a, const BoundingBox& b);

/// Euclidean norm of the center offset with its x-component divided by gt.w
/// and y-component by gt.h. Requires gt.w > 0 and gt.h > 0.
double normalized_center_distance(const BoundingBox& pred, const BoundingBox& gt);

/// Formats a box as "x,y,w,h" with shortest round-trip number formatting.
std::string to_string(const BoundingBox& box);

/// Parses "x,y,w,h" into a valid box; throws ValidationError on malformed
/// input or invariant violations.
BoundingBox parse_box(std::string_view text);

}  // namespace vltrack

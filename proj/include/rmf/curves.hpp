#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace rmf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

}  // namespace rmf

namespace rmf::curves {

/// Smooth regular curve t -> P(t) on [t_min, t_max] with derivatives up to 3.
class ParametricCurve {
 public:
  virtual ~ParametricCurve() = default;
  /// k-th derivative, 0 <= k <= 3.
  virtual Vec3 eval(double t, int k) const = 0;
  virtual double t_min() const { return -1e300; }
  virtual double t_max() const { return 1e300; }
  virtual std::string name() const = 0;
};

class CurveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// P(t) = origin + t * direction.
std::shared_ptr<const ParametricCurve> line(const Vec3& direction = Vec3(1, 0, 0), const Vec3& origin = Vec3::Zero());
/// Counter-clockwise circle of `radius` in the xy-plane centred at the origin.
std::shared_ptr<const ParametricCurve> circle(double radius = 1.0);
/// (a cos t, a sin t, b t).
std::shared_ptr<const ParametricCurve> helix(double a = 1.0, double b = 1.0);
/// (t, t^3, t^4): planar-looking near 0 where the curvature vanishes at t = 0.
std::shared_ptr<const ParametricCurve> inflection_curve();
/// t * drift + sum_k a_k cos(k w t) + b_k sin(k w t) with seeded coefficients,
/// scaled so |P'(t)| >= |drift| / 2 everywhere.
std::shared_ptr<const ParametricCurve> random_fourier(std::uint64_t seed, int modes = 4, double omega = 1.0);

/// Natural cubic spline through points, parametrized by cumulative chord
/// length. Throws CurveError on repeated consecutive points or < 4 points.
std::shared_ptr<const ParametricCurve> chord_spline(std::span<const Vec3> points);

/// Arc-length reparametrization of a regular curve starting at t0:
/// s -> P(t(s)) with s in [0, length]. Derivatives are exact up to the
/// tabulated inversion s -> t (Gauss-Legendre plus Newton, ~1e-14).
class ArclengthCurve final : public ParametricCurve {
 public:
  ArclengthCurve(std::shared_ptr<const ParametricCurve> base, double t0, double t1);

  Vec3 eval(double s, int k) const override;
  double t_min() const override { return 0.0; }
  double t_max() const override { return length_; }
  std::string name() const override { return base_->name(); }

  double length() const { return length_; }
  /// Parameter t with arc length s from t0.
  double parameter_at(double s) const;
  /// Arc length between t0 and t.
  double arclength_at(double t) const;
  const ParametricCurve& base() const { return *base_; }

 private:
  double speed(double t) const;
  double gauss(double a, double b) const;

  std::shared_ptr<const ParametricCurve> base_;
  double t0_, t1_, length_;
  std::vector<double> knots_t_;  // breakpoints of the arclength table
  std::vector<double> knots_s_;
};

/// Catalog entry by name: line, circle, helix, inflection, fourier.
/// `a`, `b` are the helix radius/pitch, `radius` the circle radius.
struct CatalogParams {
  double a = 1.0;
  double b = 1.0;
  double radius = 1.0;
  std::uint64_t seed = 0;
  int modes = 4;
};
std::shared_ptr<const ParametricCurve> from_catalog(const std::string& name, const CatalogParams& p = {});

}  // namespace rmf::curves

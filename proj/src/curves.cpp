#include "rmf/curves.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace rmf::curves {

namespace {

class Line final : public ParametricCurve {
 public:
  Line(const Vec3& d, const Vec3& o) : d_(d), o_(o) {
    if (d_.norm() == 0.0) throw CurveError("line direction must be nonzero");
  }
  Vec3 eval(double t, int k) const override {
    if (k == 0) return o_ + t * d_;
    if (k == 1) return d_;
    return Vec3::Zero();
  }
  std::string name() const override { return "line"; }

 private:
  Vec3 d_, o_;
};

class Circle final : public ParametricCurve {
 public:
  explicit Circle(double r) : r_(r) {
    if (!(r > 0)) throw CurveError("circle radius must be positive");
  }
  Vec3 eval(double t, int k) const override {
    const double c = std::cos(t), s = std::sin(t);
    switch (k) {
      case 0: return {r_ * c, r_ * s, 0};
      case 1: return {-r_ * s, r_ * c, 0};
      case 2: return {-r_ * c, -r_ * s, 0};
      default: return {r_ * s, -r_ * c, 0};
    }
  }
  std::string name() const override { return "circle"; }

 private:
  double r_;
};

class Helix final : public ParametricCurve {
 public:
  Helix(double a, double b) : a_(a), b_(b) {
    if (a == 0.0 && b == 0.0) throw CurveError("helix needs a or b nonzero");
  }
  Vec3 eval(double t, int k) const override {
    const double c = std::cos(t), s = std::sin(t);
    switch (k) {
      case 0: return {a_ * c, a_ * s, b_ * t};
      case 1: return {-a_ * s, a_ * c, b_};
      case 2: return {-a_ * c, -a_ * s, 0};
      default: return {a_ * s, -a_ * c, 0};
    }
  }
  std::string name() const override { return "helix"; }

 private:
  double a_, b_;
};

class Inflection final : public ParametricCurve {
 public:
  Vec3 eval(double t, int k) const override {
    switch (k) {
      case 0: return {t, t * t * t, t * t * t * t};
      case 1: return {1, 3 * t * t, 4 * t * t * t};
      case 2: return {0, 6 * t, 12 * t * t};
      default: return {0, 6, 24 * t};
    }
  }
  std::string name() const override { return "inflection"; }
};

class Fourier final : public ParametricCurve {
 public:
  Fourier(std::uint64_t seed, int modes, double omega) : omega_(omega) {
    if (modes < 1) throw CurveError("fourier curve needs at least one mode");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    drift_ = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
    double bound = 0.0;
    for (int k = 1; k <= modes; ++k) {
      const double decay = 1.0 / (k * k);
      Vec3 a(uni(rng), uni(rng), uni(rng)), b(uni(rng), uni(rng), uni(rng));
      a *= decay;
      b *= decay;
      cos_.push_back(a);
      sin_.push_back(b);
      bound += k * omega * (a.norm() + b.norm());
    }
    // |P'| >= |drift| - bound >= 1/2
    const double scale = bound > 0 ? 0.5 / bound : 1.0;
    for (auto& a : cos_) a *= scale;
    for (auto& b : sin_) b *= scale;
  }

  Vec3 eval(double t, int k) const override {
    Vec3 out = Vec3::Zero();
    if (k == 0) out = t * drift_;
    if (k == 1) out = drift_;
    for (std::size_t i = 0; i < cos_.size(); ++i) {
      const double w = (i + 1) * omega_;
      const double c = std::cos(w * t), s = std::sin(w * t);
      const double wk = std::pow(w, k);
      // k-th derivative of (a cos + b sin) cycles through (c, s) -> (-s, c) -> (-c, -s) -> (s, -c)
      switch (k % 4) {
        case 0: out += wk * (c * cos_[i] + s * sin_[i]); break;
        case 1: out += wk * (-s * cos_[i] + c * sin_[i]); break;
        case 2: out += wk * (-c * cos_[i] - s * sin_[i]); break;
        default: out += wk * (s * cos_[i] - c * sin_[i]); break;
      }
    }
    return out;
  }
  std::string name() const override { return "fourier"; }

 private:
  double omega_;
  Vec3 drift_;
  std::vector<Vec3> cos_, sin_;
};

class ChordSpline final : public ParametricCurve {
 public:
  explicit ChordSpline(std::span<const Vec3> pts) : p_(pts.begin(), pts.end()) {
    const std::size_t n = p_.size();
    if (n < 4) throw CurveError("need at least 4 samples, got " + std::to_string(n));
    u_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
      const double d = (p_[i] - p_[i - 1]).norm();
      if (!(d > 0)) throw CurveError("degenerate samples: points " + std::to_string(i - 1) + " and " +
                                     std::to_string(i) + " coincide");
      u_[i] = u_[i - 1] + d;
    }
    // Second derivatives with not-a-knot ends (third derivative continuous at
    // the second and second-to-last knots), so end curvature is not forced to zero.
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::MatrixX3d rhs = Eigen::MatrixX3d::Zero(static_cast<Eigen::Index>(n), 3);
    auto h = [&](std::size_t i) { return u_[i + 1] - u_[i]; };
    auto at = [&](std::size_t r, std::size_t c, double v) {
      trip.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
    };
    at(0, 0, -h(1));
    at(0, 1, h(0) + h(1));
    at(0, 2, -h(0));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = h(i - 1), h1 = h(i);
      at(i, i - 1, h0 / 6);
      at(i, i, (h0 + h1) / 3);
      at(i, i + 1, h1 / 6);
      rhs.row(static_cast<Eigen::Index>(i)) = ((p_[i + 1] - p_[i]) / h1 - (p_[i] - p_[i - 1]) / h0).transpose();
    }
    at(n - 1, n - 3, -h(n - 2));
    at(n - 1, n - 2, h(n - 3) + h(n - 2));
    at(n - 1, n - 1, -h(n - 3));
    Eigen::SparseMatrix<double> a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(a);
    if (lu.info() != Eigen::Success) throw CurveError("spline system is singular");
    const Eigen::MatrixX3d m = lu.solve(rhs);
    m_.resize(n);
    for (std::size_t i = 0; i < n; ++i) m_[i] = m.row(static_cast<Eigen::Index>(i)).transpose();
  }

  Vec3 eval(double u, int k) const override {
    std::size_t i = static_cast<std::size_t>(std::upper_bound(u_.begin(), u_.end(), u) - u_.begin());
    i = std::clamp<std::size_t>(i, 1, u_.size() - 1) - 1;
    const double h = u_[i + 1] - u_[i];
    const double A = (u_[i + 1] - u) / h, B = (u - u_[i]) / h;
    const Vec3 &y0 = p_[i], &y1 = p_[i + 1], &m0 = m_[i], &m1 = m_[i + 1];
    switch (k) {
      case 0: return A * y0 + B * y1 + ((A * A * A - A) * m0 + (B * B * B - B) * m1) * h * h / 6;
      case 1: return (y1 - y0) / h + (-(3 * A * A - 1) * m0 + (3 * B * B - 1) * m1) * h / 6;
      case 2: return A * m0 + B * m1;
      default: return (m1 - m0) / h;
    }
  }
  double t_min() const override { return 0.0; }
  double t_max() const override { return u_.back(); }
  std::string name() const override { return "spline"; }

 private:
  std::vector<Vec3> p_;
  std::vector<double> u_;
  std::vector<Vec3> m_;
};

constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

}  // namespace

std::shared_ptr<const ParametricCurve> line(const Vec3& direction, const Vec3& origin) {
  return std::make_shared<Line>(direction, origin);
}
std::shared_ptr<const ParametricCurve> circle(double radius) { return std::make_shared<Circle>(radius); }
std::shared_ptr<const ParametricCurve> helix(double a, double b) { return std::make_shared<Helix>(a, b); }
std::shared_ptr<const ParametricCurve> inflection_curve() { return std::make_shared<Inflection>(); }
std::shared_ptr<const ParametricCurve> random_fourier(std::uint64_t seed, int modes, double omega) {
  return std::make_shared<Fourier>(seed, modes, omega);
}
std::shared_ptr<const ParametricCurve> chord_spline(std::span<const Vec3> points) {
  return std::make_shared<ChordSpline>(points);
}

ArclengthCurve::ArclengthCurve(std::shared_ptr<const ParametricCurve> base, double t0, double t1)
    : base_(std::move(base)), t0_(t0), t1_(t1), length_(0.0) {
  if (!(t1 > t0)) throw CurveError("arclength table needs t1 > t0");
  const int n = std::max(16, static_cast<int>(std::ceil((t1 - t0) / 0.05)));
  knots_t_.resize(n + 1);
  knots_s_.resize(n + 1);
  knots_t_[0] = t0;
  knots_s_[0] = 0.0;
  for (int i = 1; i <= n; ++i) {
    knots_t_[i] = t0 + (t1 - t0) * i / n;
    knots_s_[i] = knots_s_[i - 1] + gauss(knots_t_[i - 1], knots_t_[i]);
  }
  knots_t_[n] = t1;
  length_ = knots_s_[n];
  for (int i = 0; i <= n; ++i)
    if (!(speed(knots_t_[i]) > 0)) throw CurveError("curve is not regular (zero speed) in the arclength table");
}

double ArclengthCurve::speed(double t) const { return base_->eval(t, 1).norm(); }

double ArclengthCurve::gauss(double a, double b) const {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGaussX.size(); ++i) acc += kGaussW[i] * speed(mid + half * kGaussX[i]);
  return acc * half;
}

double ArclengthCurve::arclength_at(double t) const {
  auto it = std::upper_bound(knots_t_.begin(), knots_t_.end(), t);
  std::size_t i = static_cast<std::size_t>(it - knots_t_.begin());
  i = std::clamp<std::size_t>(i, 1, knots_t_.size() - 1) - 1;
  return knots_s_[i] + gauss(knots_t_[i], t);
}

double ArclengthCurve::parameter_at(double s) const {
  auto it = std::upper_bound(knots_s_.begin(), knots_s_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - knots_s_.begin());
  i = std::clamp<std::size_t>(i, 1, knots_s_.size() - 1) - 1;
  const double ta = knots_t_[i], tb = knots_t_[i + 1];
  const double sa = knots_s_[i], sb = knots_s_[i + 1];
  double t = ta + (tb - ta) * (s - sa) / (sb - sa);
  for (int iter = 0; iter < 20; ++iter) {
    const double f = sa + gauss(ta, t) - s;
    const double dt = f / speed(t);
    t -= dt;
    if (std::abs(dt) <= 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

Vec3 ArclengthCurve::eval(double s, int k) const {
  const double t = parameter_at(s);
  if (k == 0) return base_->eval(t, 0);
  const Vec3 p1 = base_->eval(t, 1);
  const double v = p1.norm();
  if (k == 1) return p1 / v;
  const Vec3 p2 = base_->eval(t, 2);
  const double u = 1.0 / v;                // dt/ds
  const double vt = p1.dot(p2) / v;        // dv/dt
  const double u1 = -vt / (v * v * v);     // d^2t/ds^2
  if (k == 2) return u1 * p1 + u * u * p2;
  const Vec3 p3 = base_->eval(t, 3);
  const double vtt = (p2.dot(p2) + p1.dot(p3)) / v - vt * vt / v;
  const double u2 = -(vtt / (v * v * v) - 3 * vt * vt / (v * v * v * v)) * u;  // d^3t/ds^3
  return u2 * p1 + 3 * u * u1 * p2 + u * u * u * p3;
}

std::shared_ptr<const ParametricCurve> from_catalog(const std::string& name, const CatalogParams& p) {
  if (name == "line") return line();
  if (name == "circle") return circle(p.radius);
  if (name == "helix") return helix(p.a, p.b);
  if (name == "inflection") return inflection_curve();
  if (name == "fourier") return random_fourier(p.seed, p.modes);
  throw CurveError("unknown catalog curve '" + name + "' (line, circle, helix, inflection, fourier)");
}

}  // namespace rmf::curves

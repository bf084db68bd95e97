#include "rmf/variational.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <Eigen/Geometry>

#include "jet_canonical.hpp"
#include "rmf/finite_diff.hpp"

namespace rmf::var {

using jet::Base;

namespace {

constexpr int kAccuracy = 4;

Expr k1v(int n = 0) { return Expr::k1(n); }
Expr k2v(int n = 0) { return Expr::k2(n); }

// Replaces mu^(k), k >= 1, by D^(k-1) mu_s.
Expr substitute_mu_derivatives(const Expr& e, const Expr& mu_s) {
  const int top = jet::max_order(e, Base::mu);
  Expr out = e;
  for (int k = top; k >= 1; --k) out = jet::substitute(out, JetVar{Base::mu, k}, jet::total_derivative(mu_s, k - 1));
  return out;
}

bool only_kappa(const Expr& e) {
  for (JetVar v : jet::variables(e))
    if (v.base != Base::kappa1 && v.base != Base::kappa2) return false;
  return true;
}

std::string matrix_text(const std::array<std::array<Expr, 2>, 2>& a, int n1, int n2) {
  std::ostringstream os;
  os << "top-derivative coefficients (rows E^Y, E^Z; columns " << jet_name({Base::kappa1, n1}) << ", "
     << jet_name({Base::kappa2, n2}) << "):\n";
  for (const auto& row : a) os << "  [ " << row[0].pretty() << " , " << row[1].pretty() << " ]\n";
  return os.str();
}

// Variables appearing with a negative exponent (denominators that may vanish).
std::set<JetVar> denominator_vars(const Expr& e) {
  std::set<JetVar> out;
  const auto& rf = jet::detail::canonical(e);
  for (const auto* p : {&rf.num, &rf.den})
    for (const auto& [m, c] : *p)
      for (const auto& [v, x] : m)
        if (x < 0) out.insert(v);
  if (!rf.is_poly())
    for (const auto& [m, c] : rf.den)
      for (const auto& [v, x] : m) out.insert(v);
  return out;
}

double median(std::vector<double> x) {
  if (x.empty()) return 0.0;
  const std::size_t mid = x.size() / 2;
  std::nth_element(x.begin(), x.begin() + mid, x.end());
  double m = x[mid];
  if (x.size() % 2 == 0) {
    const double lo = *std::max_element(x.begin(), x.begin() + mid);
    m = 0.5 * (m + lo);
  }
  return m;
}

Eigen::Matrix3d cross_matrix(const Vec3& p) {
  Eigen::Matrix3d m;
  m << 0, -p.z(), p.y(), p.z(), 0, -p.x(), -p.y(), p.x(), 0;
  return m;
}

const Eigen::Matrix3d& dmat() {
  static const Eigen::Matrix3d d = Eigen::Vector3d(1, -1, 1).asDiagonal();
  return d;
}

}  // namespace

std::string jet_name(JetVar v) {
  std::string name = jet::base_name(v.base);
  if (v.order == 0) return name;
  return name + "_" + std::string(static_cast<std::size_t>(v.order), 's');
}

std::optional<JetVar> parse_jet_name(const std::string& name) {
  const auto us = name.find('_');
  const std::string head = name.substr(0, us);
  std::optional<Base> base;
  for (Base b : {Base::kappa1, Base::kappa2, Base::mu, Base::lambda})
    if (head == jet::base_name(b)) base = b;
  if (!base) return std::nullopt;
  if (us == std::string::npos) return JetVar{*base, 0};
  const std::string tail = name.substr(us + 1);
  if (tail.empty()) return std::nullopt;
  if (std::all_of(tail.begin(), tail.end(), [](char c) { return c == 's'; }))
    return JetVar{*base, static_cast<int>(tail.size())};
  if (std::all_of(tail.begin(), tail.end(), [](char c) { return c >= '0' && c <= '9'; }) && tail.size() < 3)
    return JetVar{*base, std::stoi(tail)};
  return std::nullopt;
}

std::vector<std::string> ELSystem::state_names() const {
  std::vector<std::string> out;
  for (JetVar v : state) out.push_back(jet_name(v));
  return out;
}

std::string ELSystem::text() const {
  std::ostringstream os;
  os << "Lagrangian:\n  L = " << lagrangian.pretty() << "\n\n";
  os << "Euler operators:\n  E^k1 = " << e1.pretty() << "\n  E^k2 = " << e2.pretty() << "\n\n";
  os << "Multipliers:\n  lambda = " << lambda.pretty() << "\n  mu_s = " << mu_s.pretty() << "\n";
  if (mu_closed) os << "  mu = " << mu_closed->pretty() << "  (+ constant)\n";
  os << "\nEuler-Lagrange equations (mu kept as a state):\n";
  os << "  E^X:  " << reduced[0].pretty() << " = 0\n";
  os << "  E^Y:  " << reduced[1].pretty() << " = 0\n";
  os << "  E^Z:  " << reduced[2].pretty() << " = 0\n";
  os << "  E^V3: " << reduced[3].pretty() << " = 0\n";
  if (mu_closed) {
    os << "\nWith mu = " << mu_closed->pretty() << ":\n";
    os << "  E^Y:  " << jet::substitute(reduced[1], Base::mu, *mu_closed).pretty() << " = 0\n";
    os << "  E^Z:  " << jet::substitute(reduced[2], Base::mu, *mu_closed).pretty() << " = 0\n";
  }
  if (trivial) {
    os << "\nL does not depend on k1, k2: every state is an equilibrium.\n";
  } else {
    os << "\nSolved for the top derivatives:\n";
    os << "  " << jet_name({Base::kappa1, order1}) << " = " << top1.pretty() << "\n";
    os << "  " << jet_name({Base::kappa2, order2}) << " = " << top2.pretty() << "\n";
    os << "  determinant = " << top_det.pretty() << "\n";
  }
  os << "\nState: (";
  for (std::size_t i = 0; i < state.size(); ++i) os << (i ? ", " : "") << jet_name(state[i]);
  os << ")\n";
  return os.str();
}

ELSystem assemble_el_system(const Expr& L, const Expr& lambda_constant) {
  if (!only_kappa(L)) throw VariationalError("Lagrangian may only depend on k1, k2 and their derivatives");
  ELSystem sys;
  sys.lagrangian = L;
  sys.lambda_constant = lambda_constant;
  sys.e1 = jet::euler_operator(L, Base::kappa1);
  sys.e2 = jet::euler_operator(L, Base::kappa2);
  sys.lambda = jet::lambda_closed_form(L, lambda_constant);
  sys.mu_s = jet::mu_rhs(L);
  sys.mu_closed = jet::integrate_total_derivative(sys.mu_s);

  const linop::OpMatrix hstar = linop::adjoint(linop::syzygy_operator());
  sys.raw = linop::apply(hstar, {Expr::lambda(), sys.e1, sys.e2, Expr::mu()});
  for (int i = 0; i < 4; ++i) {
    Expr r = jet::substitute(sys.raw[i], Base::lambda, sys.lambda);
    sys.reduced[i] = jet::simplify(substitute_mu_derivatives(r, sys.mu_s));
  }

  if (sys.e1.is_zero() && sys.e2.is_zero()) {
    sys.trivial = true;
    sys.order1 = sys.order2 = 1;
    sys.top1 = sys.top2 = Expr();
    sys.top_det = Expr::constant(1);
    sys.state = {{Base::kappa1, 0}, {Base::kappa2, 0}, {Base::mu, 0}};
    return sys;
  }

  const Expr& ey = sys.reduced[1];
  const Expr& ez = sys.reduced[2];
  const int n1 = std::max(jet::max_order(ey, Base::kappa1), jet::max_order(ez, Base::kappa1));
  const int n2 = std::max(jet::max_order(ey, Base::kappa2), jet::max_order(ez, Base::kappa2));
  if (n1 < 1 || n2 < 1) {
    std::ostringstream os;
    os << "E^Y = " << ey.pretty() << "\nE^Z = " << ez.pretty();
    throw NonSolvableTopOrder("Euler-Lagrange equations do not differentiate both k1 and k2", os.str());
  }
  const JetVar t1{Base::kappa1, n1}, t2{Base::kappa2, n2};
  auto& a = sys.top_matrix;
  a[0][0] = jet::partial(ey, t1);
  a[0][1] = jet::partial(ey, t2);
  a[1][0] = jet::partial(ez, t1);
  a[1][1] = jet::partial(ez, t2);
  for (const auto& row : a)
    for (const auto& x : row)
      if (!jet::partial(x, t1).is_zero() || !jet::partial(x, t2).is_zero())
        throw NonSolvableTopOrder("equations are not linear in the top derivatives", matrix_text(a, n1, n2));
  sys.top_det = jet::simplify(a[0][0] * a[1][1] - a[0][1] * a[1][0]);
  if (sys.top_det.is_zero())
    throw NonSolvableTopOrder("top-derivative coefficient matrix is identically singular", matrix_text(a, n1, n2));

  const Expr zero;
  const Expr r0 = jet::substitute(jet::substitute(ey, t1, zero), t2, zero);
  const Expr r1 = jet::substitute(jet::substitute(ez, t1, zero), t2, zero);
  sys.top1 = jet::simplify(-(a[1][1] * r0 - a[0][1] * r1) / sys.top_det);
  sys.top2 = jet::simplify(-(a[0][0] * r1 - a[1][0] * r0) / sys.top_det);
  sys.order1 = n1;
  sys.order2 = n2;
  for (int k = 0; k < n1; ++k) sys.state.push_back({Base::kappa1, k});
  for (int k = 0; k < n2; ++k) sys.state.push_back({Base::kappa2, k});
  sys.state.push_back({Base::mu, 0});

  const std::set<JetVar> allowed(sys.state.begin(), sys.state.end());
  for (const Expr* e : {&sys.top1, &sys.top2, &sys.mu_s})
    for (JetVar v : jet::variables(*e))
      if (!allowed.count(v))
        throw VariationalError("solved system references " + jet_name(v) + ", which is outside the state");
  return sys;
}

std::optional<double> closed_form_mu(const ELSystem& sys, const std::map<std::string, double>& ics) {
  if (!sys.mu_closed) return std::nullopt;
  jet::JetPoint p;
  for (const auto& [name, value] : ics)
    if (auto v = parse_jet_name(name)) p.set(*v, value);
  for (JetVar v : jet::variables(*sys.mu_closed))
    if (!p.has(v)) return std::nullopt;
  return jet::evaluate(*sys.mu_closed, p);
}

// ---- integration ----

namespace {

struct JetFiller {
  struct Item {
    JetVar target;
    jet::CompiledExpr expr;
  };
  std::vector<Item> items;
  int order1 = 0, order2 = 0;

  JetFiller(const ELSystem& sys, int extra, bool include_top) {
    std::set<JetVar> have(sys.state.begin(), sys.state.end());
    auto add = [&](JetVar target, const Expr& e) {
      for (JetVar v : jet::variables(e))
        if (!have.count(v))
          throw VariationalError("jet extension needs " + jet_name(v) + " before " + jet_name(target));
      items.push_back({target, jet::CompiledExpr(e)});
      have.insert(target);
    };
    order1 = sys.order1 - 1;
    order2 = sys.order2 - 1;
    if (include_top) {
      for (int e = 0; e <= extra; ++e) {
        if (e >= 1) add({Base::mu, e}, jet::total_derivative(sys.mu_s, e - 1));
        add({Base::kappa1, sys.order1 + e}, substitute_mu_derivatives(jet::total_derivative(sys.top1, e), sys.mu_s));
        add({Base::kappa2, sys.order2 + e}, substitute_mu_derivatives(jet::total_derivative(sys.top2, e), sys.mu_s));
      }
      order1 = sys.order1 + extra;
      order2 = sys.order2 + extra;
    }
    add({Base::lambda, 0}, sys.lambda);
    add({Base::lambda, 1}, substitute_mu_derivatives(jet::total_derivative(sys.lambda, 1), sys.mu_s));
  }

  void fill(std::array<double, jet::kSlotCount>& slots) const {
    for (const auto& it : items) slots[jet::slot(it.target)] = it.expr.eval_unchecked(slots);
  }
};

void finish_arrays(InvariantTrajectory& t) {
  const std::size_t n = t.size();
  t.k1.resize(n);
  t.k2.resize(n);
  t.mu.resize(n);
  t.lambda.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.k1[i] = t.at(i, {Base::kappa1, 0});
    t.k2[i] = t.at(i, {Base::kappa2, 0});
    t.mu[i] = t.at(i, {Base::mu, 0});
    t.lambda[i] = t.at(i, {Base::lambda, 0});
  }
}

}  // namespace

InvariantTrajectory solve_el(const ELSystem& sys, const std::map<std::string, double>& ics, double s0, double span,
                             double ds, const SolveOptions& opts) {
  InvariantTrajectory traj;
  traj.state_vars = sys.state;
  traj.h = ds;
  if (span < 0) throw VariationalError("span must be non-negative");
  if (!(ds > 0)) throw VariationalError("ds must be positive");

  std::vector<double> y0(sys.state.size());
  std::vector<std::string> missing;
  std::set<std::string> used;
  for (std::size_t i = 0; i < sys.state.size(); ++i) {
    bool found = false;
    for (const auto& [name, value] : ics) {
      auto v = parse_jet_name(name);
      if (v && *v == sys.state[i]) {
        y0[i] = value;
        used.insert(name);
        found = true;
      }
    }
    if (!found) missing.push_back(jet_name(sys.state[i]));
  }
  if (!missing.empty()) {
    std::string msg = "missing initial conditions:";
    for (const auto& m : missing) msg += " " + m;
    throw VariationalError(msg);
  }
  for (const auto& [name, value] : ics)
    if (!used.count(name)) traj.warnings.push_back("initial condition '" + name + "' is not part of the state; ignored");
  if (span == 0.0) {
    traj.warnings.push_back("zero span: empty trajectory");
    return traj;
  }

  const std::size_t dim = sys.state.size();
  std::vector<int> slot_of(dim);
  for (std::size_t i = 0; i < dim; ++i) slot_of[i] = jet::slot(sys.state[i]);
  // Index in the state of the derivative of each component, or -1 for the solved tops / mu.
  std::vector<int> next(dim, -1);
  for (std::size_t i = 0; i < dim; ++i) {
    const JetVar v = sys.state[i];
    for (std::size_t j = 0; j < dim; ++j)
      if (sys.state[j].base == v.base && sys.state[j].order == v.order + 1 && v.base != Base::mu)
        next[i] = static_cast<int>(j);
  }
  const auto top1 = std::make_shared<jet::CompiledExpr>(sys.top1);
  const auto top2 = std::make_shared<jet::CompiledExpr>(sys.top2);
  const auto mus = std::make_shared<jet::CompiledExpr>(sys.mu_s);
  const auto det = std::make_shared<jet::CompiledExpr>(sys.top_det);
  const bool det_const = sys.top_det.constant_value().has_value();
  std::vector<int> guarded;
  if (!sys.trivial)
    for (const Expr* e : {&sys.top1, &sys.top2, &sys.mu_s})
      for (JetVar v : denominator_vars(*e)) guarded.push_back(jet::slot(v));
  std::sort(guarded.begin(), guarded.end());
  guarded.erase(std::unique(guarded.begin(), guarded.end()), guarded.end());

  auto load = [slot_of](std::span<const double> y, std::array<double, jet::kSlotCount>& slots) {
    for (std::size_t i = 0; i < y.size(); ++i) slots[slot_of[i]] = y[i];
  };

  ode::OdeProblem prob;
  prob.y0 = y0;
  if (opts.carry_frame) {
    for (int r = 0; r < 3; ++r)
      for (int k = 0; k < 3; ++k) prob.y0.push_back(opts.sigma0(r, k));
    for (int k = 0; k < 3; ++k) prob.y0.push_back(opts.p0[k]);
  }
  const bool carry = opts.carry_frame;
  const int i1 = std::find(sys.state.begin(), sys.state.end(), JetVar{Base::kappa1, 0}) - sys.state.begin();
  const int i2 = std::find(sys.state.begin(), sys.state.end(), JetVar{Base::kappa2, 0}) - sys.state.begin();
  prob.tol = opts.tol;
  prob.substeps = opts.substeps;
  const bool trivial = sys.trivial;
  const JetVar k1top{Base::kappa1, sys.order1 - 1}, k2top{Base::kappa2, sys.order2 - 1};
  prob.rhs = [=](double, std::span<const double> y, std::span<double> dy) {
    std::array<double, jet::kSlotCount> slots{};
    load(y.first(dim), slots);
    if (carry) {
      const double a = y[i1], b = y[i2];
      const double* sg = y.data() + dim;
      for (int k = 0; k < 3; ++k) {
        dy[dim + k] = a * sg[3 + k] + b * sg[6 + k];
        dy[dim + 3 + k] = -a * sg[k];
        dy[dim + 6 + k] = -b * sg[k];
        dy[dim + 9 + k] = sg[k];
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (trivial) {
        dy[i] = 0.0;
        continue;
      }
      const JetVar v = sys.state[i];
      if (next[i] >= 0) {
        dy[i] = y[next[i]];
      } else if (v == k1top) {
        dy[i] = top1->eval_unchecked(slots);
      } else if (v == k2top) {
        dy[i] = top2->eval_unchecked(slots);
      } else {
        dy[i] = mus->eval_unchecked(slots);
      }
    }
  };
  const double det_eps = opts.det_eps, sing_eps = opts.singular_eps, blowup = opts.blowup;
  prob.guard = [=](double s, std::span<const double> y) -> std::optional<std::string> {
    std::array<double, jet::kSlotCount> slots{};
    y = y.first(dim);
    load(y, slots);
    char buf[160];
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (!std::isfinite(y[i]) || std::abs(y[i]) > blowup) {
        std::snprintf(buf, sizeof buf, "state %s blew up near s = %.6g", jet_name(sys.state[i]).c_str(), s);
        return std::string(buf);
      }
    }
    for (int sl : guarded) {
      if (std::abs(slots[sl]) < sing_eps) {
        const JetVar v{static_cast<Base>(sl / (jet::kMaxStorageOrder + 1)), sl % (jet::kMaxStorageOrder + 1)};
        std::snprintf(buf, sizeof buf, "singularity: %s -> 0 near s = %.6g", jet_name(v).c_str(), s);
        return std::string(buf);
      }
    }
    if (!trivial && !det_const && std::abs(det->eval_unchecked(slots)) < det_eps) {
      std::snprintf(buf, sizeof buf, "singularity: top-derivative determinant -> 0 near s = %.6g", s);
      return std::string(buf);
    }
    return std::nullopt;
  };
  if (auto why = prob.guard(s0, prob.y0)) throw VariationalError("initial conditions are singular: " + *why);

  const std::vector<double> grid = ode::uniform_grid(s0, s0 + span, ds);
  ode::OdeSolution sol = ode::integrate(prob, grid, opts.method);
  traj.status = sol.status;
  traj.truncated = !sol.ok();
  traj.message = sol.message;
  traj.s = sol.s;
  traj.state = sol.y;
  if (carry) {
    for (auto& y : traj.state) {
      Mat3 sg;
      for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) sg(r, k) = y[dim + 3 * r + k];
      traj.sigma.push_back(sg);
      traj.position.emplace_back(y[dim + 9], y[dim + 10], y[dim + 11]);
      y.resize(dim);
    }
  }

  JetFiller filler(sys, sys.trivial ? 0 : opts.extra_orders, !sys.trivial);
  traj.jet_order1 = filler.order1;
  traj.jet_order2 = filler.order2;
  traj.jets.resize(traj.s.size());
  for (std::size_t i = 0; i < traj.s.size(); ++i) {
    auto& slots = traj.jets[i];
    slots.fill(0.0);
    load(traj.state[i], slots);
    if (sys.trivial) {
      for (int k = 1; k <= 1 + opts.extra_orders; ++k) {
        slots[jet::slot({Base::kappa1, k})] = 0.0;
        slots[jet::slot({Base::kappa2, k})] = 0.0;
      }
    }
    filler.fill(slots);
  }
  finish_arrays(traj);
  return traj;
}

InvariantTrajectory trajectory_from_samples(const ELSystem& sys, std::span<const double> k1,
                                            std::span<const double> k2, std::span<const double> mu, double s0,
                                            double h) {
  const std::size_t n = k1.size();
  if (k2.size() != n || mu.size() != n) throw VariationalError("sample arrays differ in length");
  InvariantTrajectory t;
  t.h = h;
  t.state_vars = sys.state;
  t.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) t.s[i] = s0 + i * h;
  const int top = std::max(sys.order1, sys.order2) + 2;
  auto jets = linop::finite_difference_jets(k1, k2, h, top, kAccuracy);
  std::vector<std::vector<double>> mud{std::vector<double>(mu.begin(), mu.end())};
  for (int k = 1; k <= 3; ++k) mud.push_back(fd::derivative(mu, h, k, kAccuracy));
  JetFiller filler(sys, 0, false);
  t.jet_order1 = t.jet_order2 = top;
  t.jets.resize(n);
  t.state.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& slots = t.jets[i];
    slots.fill(0.0);
    for (const auto& [v, arr] : jets) slots[jet::slot(v)] = arr[i];
    for (int k = 0; k <= 3; ++k) slots[jet::slot({Base::mu, k})] = mud[k][i];
    filler.fill(slots);
    for (JetVar v : sys.state) t.state[i].push_back(slots[jet::slot(v)]);
  }
  finish_arrays(t);
  return t;
}

// ---- Noether ----

std::array<Expr, 6> noether_vector(const Expr& L, const Expr& lambda_constant) {
  const Expr e1 = jet::euler_operator(L, Base::kappa1);
  const Expr e2 = jet::euler_operator(L, Base::kappa2);
  const Expr mu = Expr::mu();
  return {jet::lambda_closed_form(L, lambda_constant),
          jet::simplify(-jet::total_derivative(e1) - mu * k2v()),
          jet::simplify(-jet::total_derivative(e2) + mu * k1v()),
          mu,
          e2,
          e1};
}

std::array<Expr, 6> noether_vector(const ELSystem& sys) {
  const Expr mu = Expr::mu();
  return {sys.lambda,
          jet::simplify(-jet::total_derivative(sys.e1) - mu * k2v()),
          jet::simplify(-jet::total_derivative(sys.e2) + mu * k1v()),
          mu,
          sys.e2,
          sys.e1};
}

std::vector<std::array<double, 6>> noether_values(const ELSystem& sys, const InvariantTrajectory& traj) {
  const auto v = noether_vector(sys);
  std::vector<jet::CompiledExpr> cv;
  for (const auto& e : v) cv.emplace_back(e);
  std::vector<Vec6> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    for (int k = 0; k < 6; ++k) out[i][k] = cv[k].eval_unchecked(traj.jets[i]);
  return out;
}

Vec6 adjoint_transform(const Mat3& sigma, const Vec3& p, const Vec6& v) {
  const Vec3 w1(v[0], v[1], v[2]), w2(v[3], v[4], v[5]);
  const Vec3 c1 = sigma.transpose() * w1;
  const Vec3 c2 = dmat() * p.cross(c1) + dmat() * sigma.transpose() * dmat() * w2;
  return {c1.x(), c1.y(), c1.z(), c2.x(), c2.y(), c2.z()};
}

Eigen::Matrix<double, 6, 6> adjoint_matrix(const Mat3& sigma, const Vec3& p) {
  Eigen::Matrix<double, 6, 6> a = Eigen::Matrix<double, 6, 6>::Zero();
  a.block<3, 3>(0, 0) = sigma.transpose();
  a.block<3, 3>(3, 0) = dmat() * cross_matrix(p) * sigma.transpose();
  a.block<3, 3>(3, 3) = dmat() * sigma.transpose() * dmat();
  return a;
}

NoetherState conservation_constants(const ELSystem& sys, const InvariantTrajectory& traj,
                                    const frames::FrameField& frame, const frames::CurveSamples& curve) {
  const std::size_t n = traj.size();
  if (frame.size() != n || curve.size() != n)
    throw VariationalError("grid mismatch: trajectory, frame and curve must have the same nodes");
  NoetherState st;
  st.v = noether_vector(sys);
  st.v_values = noether_values(sys, traj);
  st.c_values.resize(n);
  for (std::size_t i = 0; i < n; ++i) st.c_values[i] = adjoint_transform(frame.sigma[i], curve.p[i], st.v_values[i]);
  double cmax = 0.0;
  for (int k = 0; k < 6; ++k) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = st.c_values[i][k];
    st.c[k] = median(col);
    double d = 0.0;
    for (double x : col) d = std::max(d, std::abs(x - st.c[k]));
    st.drift[k] = d;
    cmax = std::max(cmax, std::abs(st.c[k]));
  }
  const double scale = std::max(1.0, cmax);
  for (int k = 0; k < 6; ++k) st.relative_drift = std::max(st.relative_drift, st.drift[k] / scale);
  return st;
}

NoetherState conservation_constants(const ELSystem& sys, const InvariantTrajectory& traj) {
  if (!traj.has_frame()) throw VariationalError("trajectory was solved without carry_frame");
  frames::FrameField f;
  f.sigma = traj.sigma;
  frames::CurveSamples c;
  c.s = traj.s;
  c.h = traj.h;
  c.p = traj.position;
  return conservation_constants(sys, traj, f, c);
}

Eigen::Matrix<double, 6, 6> noether_matrix(double k1, double k2) {
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix3d q;
  q << 0, k1, k2, -k1, 0, 0, -k2, 0, 0;
  m.block<3, 3>(0, 0) = q;
  m.block<3, 3>(3, 3) = dmat() * q * dmat();
  m(4, 2) = -1.0;
  m(5, 1) = -1.0;
  return m;
}

DiffvReport check_diffv(const ELSystem& sys, const InvariantTrajectory& traj, bool fd_derivative) {
  DiffvReport r;
  const auto v = noether_vector(sys);
  const Expr k1 = k1v(), k2 = k2v();
  std::array<Expr, 6> dv;
  for (int i = 0; i < 6; ++i) dv[i] = jet::total_derivative(v[i]);
  std::array<Expr, 6> mv = {k1 * v[1] + k2 * v[2],
                            -k1 * v[0],
                            -k2 * v[0],
                            -k1 * v[4] + k2 * v[5],
                            k1 * v[3] - v[2],
                            -k2 * v[3] - v[1]};
  for (int i = 0; i < 6; ++i) r.symbolic_residual[i] = jet::simplify(dv[i] - mv[i]);
  r.rows56_symbolic_zero = r.symbolic_residual[4].is_zero() && r.symbolic_residual[5].is_zero();

  const std::size_t n = traj.size();
  if (n == 0) return r;
  const std::size_t skip = static_cast<std::size_t>(fd::boundary_width(1, kAccuracy));
  if (fd_derivative) {
    if (n < 7) return r;
    const auto vals = noether_values(sys, traj);
    std::array<std::vector<double>, 6> cols;
    for (int k = 0; k < 6; ++k) {
      std::vector<double> col(n);
      for (std::size_t i = 0; i < n; ++i) col[i] = vals[i][k];
      cols[k] = fd::derivative(std::span<const double>(col), traj.h, 1, kAccuracy);
    }
    for (std::size_t i = skip; i + skip < n; ++i) {
      Eigen::Matrix<double, 6, 1> vv, dd;
      for (int k = 0; k < 6; ++k) {
        vv[k] = vals[i][k];
        dd[k] = cols[k][i];
      }
      const auto res = dd - noether_matrix(traj.k1[i], traj.k2[i]) * vv;
      for (int k = 0; k < 6; ++k) r.max_residual[k] = std::max(r.max_residual[k], std::abs(res[k]));
    }
    return r;
  }
  std::array<jet::CompiledExpr, 6> cr;
  for (int k = 0; k < 6; ++k) {
    // mu_s stays symbolic in the residual; the jets carry its value.
    cr[k] = jet::CompiledExpr(r.symbolic_residual[k]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 6; ++k) r.max_residual[k] = std::max(r.max_residual[k], std::abs(cr[k].eval_unchecked(traj.jets[i])));
  return r;
}

std::array<double, 2> el_residuals(const ELSystem& sys, const InvariantTrajectory& traj) {
  std::array<double, 2> out{0.0, 0.0};
  const std::size_t n = traj.size();
  if (n < 7 || sys.trivial) {
    if (sys.trivial) {
      const jet::CompiledExpr ey(sys.reduced[1]), ez(sys.reduced[2]);
      for (std::size_t i = 0; i < n; ++i) {
        out[0] = std::max(out[0], std::abs(ey.eval_unchecked(traj.jets[i])));
        out[1] = std::max(out[1], std::abs(ez.eval_unchecked(traj.jets[i])));
      }
    }
    return out;
  }
  const JetVar below1{Base::kappa1, sys.order1 - 1}, below2{Base::kappa2, sys.order2 - 1};
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = traj.at(i, below1);
    b[i] = traj.at(i, below2);
  }
  const auto da = fd::derivative(std::span<const double>(a), traj.h, 1, kAccuracy);
  const auto db = fd::derivative(std::span<const double>(b), traj.h, 1, kAccuracy);
  const jet::CompiledExpr ey(sys.reduced[1]), ez(sys.reduced[2]);
  const std::size_t skip = static_cast<std::size_t>(fd::boundary_width(1, kAccuracy));
  for (std::size_t i = skip; i + skip < n; ++i) {
    auto slots = traj.jets[i];
    slots[jet::slot({Base::kappa1, sys.order1})] = da[i];
    slots[jet::slot({Base::kappa2, sys.order2})] = db[i];
    out[0] = std::max(out[0], std::abs(ey.eval_unchecked(slots)));
    out[1] = std::max(out[1], std::abs(ez.eval_unchecked(slots)));
  }
  return out;
}

// ---- syzygy compatibility ----

CurveFamily helix_pitch_family(double a, double b0, double b1) {
  auto geometry = [=](double s, double t, bool normal) -> Vec3 {
    const double b = b0 + b1 * std::sin(t);
    const double c = std::sqrt(a * a + b * b);
    const double u = s / c;
    if (!normal) return {a * std::cos(u), a * std::sin(u), b * u};
    const double tau = b / (c * c);
    const Vec3 T(-a / c * std::sin(u), a / c * std::cos(u), b / c);
    const Vec3 N(-std::cos(u), -std::sin(u), 0.0);
    const Vec3 B = T.cross(N);
    return std::cos(tau * s) * N - std::sin(tau * s) * B;
  };
  return {"helix_pitch", [=](double s, double t) { return geometry(s, t, false); },
          [=](double s, double t) { return geometry(s, t, true); }};
}

CurveFamily static_family() {
  CurveFamily h = helix_pitch_family(1.0, 1.0, 0.0);
  h.name = "static_helix";
  return h;
}

CurveFamily rigid_motion_family() {
  const CurveFamily base = static_family();
  const Vec3 axis = Vec3(1, 2, 3).normalized();
  auto rot = [axis](double t) { return Eigen::AngleAxisd(0.7 * t, axis).toRotationMatrix(); };
  auto shift = [](double t) { return Vec3(t, t * t, std::sin(t)); };
  return {"rigid_motion",
          [=](double s, double t) -> Vec3 { return rot(t) * base.P(s, t) + shift(t); },
          [=](double s, double t) -> Vec3 { return rot(t) * base.V(s, t); }};
}

namespace {

struct LocalInvariants {
  std::array<double, 4> inv;     // X', Y'', Z'', V3'
  std::array<double, 4> evo;     // X_t, Y_t, Z_t, V3_t
};

LocalInvariants local(const CurveFamily& f, double s, double t, double ds, double dt) {
  const Vec3 p = f.P(s, t);
  const Vec3 pp = f.P(s + ds, t), pm = f.P(s - ds, t);
  const Vec3 ps = (pp - pm) / (2 * ds);
  const Vec3 pss = (pp - 2 * p + pm) / (ds * ds);
  const Vec3 v = f.V(s, t);
  const Vec3 vs = (f.V(s + ds, t) - f.V(s - ds, t)) / (2 * ds);
  const Vec3 tt = ps.normalized();
  const Vec3 w = tt.cross(v);
  const Vec3 pt = (f.P(s, t + dt) - f.P(s, t - dt)) / (2 * dt);
  const Vec3 vt = (f.V(s, t + dt) - f.V(s, t - dt)) / (2 * dt);
  LocalInvariants li;
  li.inv = {tt.dot(ps), v.dot(pss), w.dot(pss), w.dot(vs)};
  li.evo = {tt.dot(pt), v.dot(pt), w.dot(pt), w.dot(vt)};
  for (int k = 0; k < 4; ++k)
    if (!std::isfinite(li.inv[k]) || !std::isfinite(li.evo[k]))
      throw VariationalError("curve family is not smooth enough: non-finite difference at s = " + std::to_string(s));
  return li;
}

}  // namespace

EvolutionField evolution_field(const CurveFamily& fam, double s0, double s1, double t, double ds, double dt) {
  EvolutionField ef;
  ef.s = ode::uniform_grid(s0, s1, ds);
  for (auto& c : ef.components) c.resize(ef.s.size());
  for (std::size_t i = 0; i < ef.s.size(); ++i) {
    const auto li = local(fam, ef.s[i], t, ds, dt);
    for (int k = 0; k < 4; ++k) ef.components[k][i] = li.evo[k];
  }
  return ef;
}

CompatibilityReport check_syzygy_compatibility(const CurveFamily& fam, double s0, double s1, double t0, double ds,
                                               double dt) {
  // Extended grid with one extra node at each end for the s-differences.
  const std::vector<double> grid = ode::uniform_grid(s0 - ds, s1 + ds, ds);
  const std::size_t n = grid.size();
  if (n < 5) throw VariationalError("grid too short for stencil");
  std::vector<std::array<double, 4>> inv(n), evo(n), inv_p(n), inv_m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto li = local(fam, grid[i], t0, ds, dt);
    inv[i] = li.inv;
    evo[i] = li.evo;
    inv_p[i] = local(fam, grid[i], t0 + dt, ds, dt).inv;
    inv_m[i] = local(fam, grid[i], t0 - dt, ds, dt).inv;
  }
  auto d1 = [&](const auto& arr, std::size_t i, int k) { return (arr[i + 1][k] - arr[i - 1][k]) / (2 * ds); };
  auto d2 = [&](const auto& arr, std::size_t i, int k) {
    return (arr[i + 1][k] - 2 * arr[i][k] + arr[i - 1][k]) / (ds * ds);
  };
  auto prod_d1 = [&](std::size_t i, int kc, int ke) {  // D(coef * evo)
    return (inv[i + 1][kc] * evo[i + 1][ke] - inv[i - 1][kc] * evo[i - 1][ke]) / (2 * ds);
  };
  CompatibilityReport rep;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double k1 = inv[i][1], k2 = inv[i][2];
    std::array<double, 4> lhs, rhs;
    for (int k = 0; k < 4; ++k) lhs[k] = (inv_p[i][k] - inv_m[i][k]) / (2 * dt);
    rhs[0] = d1(evo, i, 0) - k1 * evo[i][1] - k2 * evo[i][2];
    rhs[1] = prod_d1(i, 1, 0) + d2(evo, i, 1) + k2 * evo[i][3];
    rhs[2] = prod_d1(i, 2, 0) + d2(evo, i, 2) - k1 * evo[i][3];
    rhs[3] = -k2 * d1(evo, i, 1) + k1 * d1(evo, i, 2) + d1(evo, i, 3);
    for (int k = 0; k < 4; ++k) {
      const double r = std::abs(lhs[k] - rhs[k]);
      rep.row_max[k] = std::max(rep.row_max[k], r);
      rep.max_residual = std::max(rep.max_residual, r);
    }
    ++rep.nodes;
  }
  return rep;
}

}  // namespace rmf::var

#include "rmf/linop.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "rmf/finite_diff.hpp"

namespace rmf::linop {

using jet::Expr;

namespace {

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

ScalarOp ScalarOp::mul(const Expr& a) { return ScalarOp().add(0, a); }

ScalarOp ScalarOp::d(int k) { return ScalarOp().add(k, Expr::constant(1)); }

ScalarOp ScalarOp::d_after(const Expr& a, int k) {
  // D^k(a f) = sum_j C(k, j) D^{k-j}(a) D^j f
  ScalarOp out;
  for (int j = 0; j <= k; ++j) out.add(j, Expr::constant(binomial(k, j)) * jet::total_derivative(a, k - j));
  return out;
}

ScalarOp& ScalarOp::add(int k, const Expr& a) {
  if (k < 0) throw std::invalid_argument("negative operator order");
  auto it = coeffs_.find(k);
  Expr sum = jet::simplify(it == coeffs_.end() ? a : it->second + a);
  if (sum.is_zero()) {
    if (it != coeffs_.end()) coeffs_.erase(it);
  } else {
    coeffs_.insert_or_assign(k, sum);
  }
  return *this;
}

Expr ScalarOp::apply(const Expr& f) const {
  Expr acc;
  for (const auto& [k, a] : coeffs_) acc = acc + a * jet::total_derivative(f, k);
  return jet::simplify(acc);
}

std::string ScalarOp::pretty() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    const auto& [k, a] = *it;
    const bool unit = a.constant_value() && *a.constant_value() == 1.0;
    if (k == 0) {
      os << a.pretty();
      continue;
    }
    if (!unit) os << "(" << a.pretty() << ")";
    os << (k == 1 ? std::string("D") : "D^" + std::to_string(k));
  }
  return os.str();
}

ScalarOp operator+(const ScalarOp& a, const ScalarOp& b) {
  ScalarOp out = a;
  for (const auto& [k, c] : b.coeffs()) out.add(k, c);
  return out;
}

ScalarOp operator-(const ScalarOp& a) {
  ScalarOp out;
  for (const auto& [k, c] : a.coeffs()) out.add(k, -c);
  return out;
}

bool equivalent(const ScalarOp& a, const ScalarOp& b) {
  ScalarOp diff = a + (-b);
  return diff.is_zero();
}

ScalarOp adjoint(const ScalarOp& op, bool flip_sign) {
  ScalarOp out;
  for (const auto& [k, a] : op.coeffs()) {
    ScalarOp term = ScalarOp::d_after(a, k);
    const bool negate = (k % 2 == 1) && !flip_sign;
    out = out + (negate ? -term : term);
  }
  return out;
}

OpMatrix adjoint(const OpMatrix& m, bool flip_sign) {
  OpMatrix out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[j][i] = adjoint(m[i][j], flip_sign);
  return out;
}

ExprVec apply(const OpMatrix& m, const ExprVec& f) {
  ExprVec out;
  for (int i = 0; i < 4; ++i) {
    Expr acc;
    for (int j = 0; j < 4; ++j)
      if (!m[i][j].is_zero()) acc = acc + m[i][j].apply(f[j]);
    out[i] = jet::simplify(acc);
  }
  return out;
}

bool equivalent(const OpMatrix& a, const OpMatrix& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!equivalent(a[i][j], b[i][j])) return false;
  return true;
}

std::string pretty(const OpMatrix& m) {
  std::ostringstream os;
  for (int i = 0; i < 4; ++i) {
    os << "[ ";
    for (int j = 0; j < 4; ++j) os << (j ? " | " : "") << m[i][j].pretty();
    os << " ]\n";
  }
  return os.str();
}

OpMatrix syzygy_operator() {
  const Expr k1 = Expr::k1(), k2 = Expr::k2();
  OpMatrix h;
  h[0][0] = ScalarOp::d();
  h[0][1] = ScalarOp::mul(-k1);
  h[0][2] = ScalarOp::mul(-k2);
  h[1][0] = ScalarOp::d_after(k1);
  h[1][1] = ScalarOp::d(2);
  h[1][3] = ScalarOp::mul(k2);
  h[2][0] = ScalarOp::d_after(k2);
  h[2][2] = ScalarOp::d(2);
  h[2][3] = ScalarOp::mul(-k1);
  h[3][1] = ScalarOp().add(1, -k2);
  h[3][2] = ScalarOp().add(1, k1);
  h[3][3] = ScalarOp::d();
  return h;
}

GridOperator::GridOperator(const OpMatrix& op, std::map<jet::JetVar, std::vector<double>> jets, double h,
                           int accuracy)
    : op_(op), jets_(std::move(jets)), h_(h), accuracy_(accuracy), n_(0) {
  for (const auto& [v, arr] : jets_) {
    if (n_ == 0) n_ = arr.size();
    if (arr.size() != n_) throw std::invalid_argument("jet arrays differ in length");
  }
  for (const auto& row : op_)
    for (const auto& entry : row)
      for (const auto& [k, a] : entry.coeffs())
        for (jet::JetVar v : jet::variables(a))
          if (!jets_.count(v)) throw std::invalid_argument("grid operator lacks jet values for a coefficient");
}

int GridOperator::boundary_width() const {
  int top = 1;
  for (const auto& row : op_)
    for (const auto& entry : row) top = std::max(top, entry.order());
  return fd::boundary_width(top, accuracy_);
}

GridOperator::Field GridOperator::apply(const Field& phi) const {
  std::size_t n = n_;
  for (const auto& f : phi) {
    if (n == 0) n = f.size();
    if (f.size() != n) throw std::invalid_argument("field length does not match the grid");
  }
  Field out;
  for (auto& o : out) o.assign(n, 0.0);
  std::array<double, jet::kSlotCount> slots{};
  for (int j = 0; j < 4; ++j) {
    std::map<int, std::vector<double>> derivs;
    for (int i = 0; i < 4; ++i)
      for (const auto& [k, a] : op_[i][j].coeffs())
        if (k > 0 && !derivs.count(k)) derivs[k] = fd::derivative(std::span<const double>(phi[j]), h_, k, accuracy_);
    for (int i = 0; i < 4; ++i) {
      for (const auto& [k, a] : op_[i][j].coeffs()) {
        const jet::CompiledExpr ca(a);
        const auto& d = k == 0 ? phi[j] : derivs[k];
        const auto vars = jet::variables(a);
        for (std::size_t p = 0; p < n; ++p) {
          for (jet::JetVar v : vars) slots[jet::slot(v)] = jets_.at(v)[p];
          out[i][p] += ca.eval_unchecked(slots) * d[p];
        }
      }
    }
  }
  return out;
}

std::map<jet::JetVar, std::vector<double>> finite_difference_jets(std::span<const double> k1,
                                                                  std::span<const double> k2, double h,
                                                                  int order, int accuracy) {
  if (k1.size() != k2.size()) throw std::invalid_argument("k1 and k2 differ in length");
  std::map<jet::JetVar, std::vector<double>> jets;
  jets[{jet::Base::kappa1, 0}] = {k1.begin(), k1.end()};
  jets[{jet::Base::kappa2, 0}] = {k2.begin(), k2.end()};
  for (int m = 1; m <= order; ++m) {
    jets[{jet::Base::kappa1, m}] = fd::derivative(k1, h, m, accuracy);
    jets[{jet::Base::kappa2, m}] = fd::derivative(k2, h, m, accuracy);
  }
  return jets;
}

GridOperator syzygy_grid_operator(std::span<const double> k1, std::span<const double> k2, double h, int accuracy,
                                  bool adjoint_op, bool flip_sign) {
  OpMatrix op = syzygy_operator();
  if (adjoint_op) op = adjoint(op, flip_sign);
  int need = 0;
  for (const auto& row : op)
    for (const auto& entry : row)
      for (const auto& [k, a] : entry.coeffs()) need = std::max(need, jet::max_order(a));
  const std::size_t min_nodes = static_cast<std::size_t>(2 + accuracy + 1);
  if (k1.size() < min_nodes) throw std::invalid_argument("grid too short for stencil");
  return GridOperator(op, finite_difference_jets(k1, k2, h, need, accuracy), h, accuracy);
}

}  // namespace rmf::linop

#include "rmf/finite_diff.hpp"

#include <cmath>
#include <stdexcept>

namespace rmf::fd {

std::vector<double> weights(double x0, std::span<const double> nodes, int m) {
  const int n = static_cast<int>(nodes.size()) - 1;
  if (m < 0 || m > n) throw std::invalid_argument("fd::weights: derivative order exceeds stencil size");
  // c[j][k]: weight of node j for the k-th derivative.
  std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
  double c1 = 1.0, c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n + 1);
  for (int j = 0; j <= n; ++j) w[j] = c[j][m];
  return w;
}

namespace {

int central_size(int m, int accuracy) {
  int n = m + accuracy - 1;
  if (n % 2 == 0) ++n;
  return n;
}

struct Stencils {
  int central_half = 0;
  std::vector<double> central;                 // offsets -half..half
  std::vector<std::vector<double>> left;       // node i uses nodes 0..size-1
  std::vector<std::vector<double>> right;      // mirrored at the end
  int one_sided = 0;
};

Stencils make_stencils(int m, int accuracy, double h) {
  Stencils st;
  const int nc = central_size(m, accuracy);
  st.central_half = nc / 2;
  std::vector<double> nodes(nc);
  for (int j = 0; j < nc; ++j) nodes[j] = (j - st.central_half) * h;
  st.central = weights(0.0, nodes, m);
  st.one_sided = m + accuracy;
  std::vector<double> onodes(st.one_sided);
  for (int j = 0; j < st.one_sided; ++j) onodes[j] = j * h;
  for (int i = 0; i < st.central_half; ++i) {
    st.left.push_back(weights(i * h, onodes, m));
    st.right.push_back(weights((st.one_sided - 1 - i) * h, onodes, m));
  }
  return st;
}

template <typename T>
std::vector<T> apply(std::span<const T> f, double h, int m, int accuracy, T zero) {
  if (m < 1) throw std::invalid_argument("fd::derivative: order must be >= 1");
  const Stencils st = make_stencils(m, accuracy, h);
  const int n = static_cast<int>(f.size());
  if (n < st.one_sided) throw std::invalid_argument("fd::derivative: grid too short for stencil");
  std::vector<T> out(n, zero);
  for (int i = st.central_half; i < n - st.central_half; ++i) {
    T acc = zero;
    for (int j = -st.central_half; j <= st.central_half; ++j) acc += st.central[j + st.central_half] * f[i + j];
    out[i] = acc;
  }
  for (int i = 0; i < st.central_half; ++i) {
    T acc = zero;
    for (int j = 0; j < st.one_sided; ++j) acc += st.left[i][j] * f[j];
    out[i] = acc;
    T acc_r = zero;
    const int base = n - st.one_sided;
    for (int j = 0; j < st.one_sided; ++j) acc_r += st.right[i][j] * f[base + j];
    out[n - 1 - i] = acc_r;
  }
  return out;
}

}  // namespace

int boundary_width(int m, int accuracy) { return central_size(m, accuracy) / 2; }

std::vector<double> derivative(std::span<const double> f, double h, int m, int accuracy) {
  return apply<double>(f, h, m, accuracy, 0.0);
}

std::vector<Eigen::Vector3d> derivative(std::span<const Eigen::Vector3d> f, double h, int m, int accuracy) {
  return apply<Eigen::Vector3d>(f, h, m, accuracy, Eigen::Vector3d::Zero());
}

}  // namespace rmf::fd

#include "o2lyap/quadrature.hpp"

#include <array>

#include "o2lyap/errors.hpp"

namespace o2lyap {

void QuadratureConfig::validate() const {
  if (panels < 2) throw ConfigError("QuadratureConfig: panels must be >= 2");
  if (rule == QuadratureRule::CompositeSimpson && panels % 2 != 0) {
    throw ConfigError("QuadratureConfig: Simpson needs an even panel count");
  }
  if (nested_panels < 2) throw ConfigError("QuadratureConfig: nested_panels must be >= 2");
  if (rule == QuadratureRule::CompositeSimpson && nested_panels % 2 != 0) {
    throw ConfigError("QuadratureConfig: Simpson needs an even nested panel count");
  }
}

Quadrature::Quadrature(QuadratureRule rule, int panels) {
  if (panels < 1) throw ConfigError("Quadrature: panels must be positive");
  if (rule == QuadratureRule::CompositeSimpson) {
    if (panels % 2 != 0) throw ConfigError("Quadrature: Simpson needs an even panel count");
    const int n = 2 * panels;  // finest spacing 1/n, Simpson over pairs
    nodes_.resize(n + 1);
    weights_.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      nodes_[j] = static_cast<double>(j) / n;
      const double w = (j == 0 || j == n) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
      weights_[j] = w / (3.0 * n);
    }
    return;
  }
  // 4-point Gauss-Legendre on [-1, 1].
  constexpr std::array<double, 4> x = {-0.8611363115940526, -0.3399810435848563,
                                       0.3399810435848563, 0.8611363115940526};
  constexpr std::array<double, 4> w = {0.3478548451374538, 0.6521451548625461,
                                       0.6521451548625461, 0.3478548451374538};
  nodes_.reserve(4 * panels);
  weights_.reserve(4 * panels);
  const double h = 1.0 / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (std::size_t k = 0; k < 4; ++k) {
      nodes_.push_back(mid + 0.5 * h * x[k]);
      weights_.push_back(0.5 * h * w[k]);
    }
  }
}

}  // namespace o2lyap

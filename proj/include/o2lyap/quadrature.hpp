#pragma once

#include <span>
#include <vector>

namespace o2lyap {

enum class QuadratureRule { CompositeSimpson, GaussLegendre };

/// `panels` drives single integrals and the outer level of iterated ones.
/// `nested_panels` drives inner integrals that cannot share the outer nodes:
/// the inner level of an iterated Gauss-Legendre integral and the node-wise
/// metric-exponent quadrature of the Lagrangian.
struct QuadratureConfig {
  QuadratureRule rule = QuadratureRule::CompositeSimpson;
  int panels = 64;
  int nested_panels = 64;

  void validate() const;
  bool operator==(const QuadratureConfig&) const = default;
};

/// Fixed rule on the reference interval [0, 1].
///
/// CompositeSimpson: `panels` (even) subintervals, 2*panels + 1 nodes.
/// GaussLegendre: `panels` subintervals with a 4-point Gauss rule on each.
class Quadrature {
 public:
  Quadrature(QuadratureRule rule, int panels);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Integral of f over [a, b]; b < a yields the negated integral.
  template <class F>
  double integrate(F&& f, double a, double b) const {
    if (a == b) return 0.0;
    const double len = b - a;
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * f(a + len * nodes_[i]);
    return len * acc;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Single integral of f over [a, b] with `cfg.rule` and `cfg.panels`.
template <class F>
double integrate(F&& f, double a, double b, QuadratureRule rule, int panels) {
  return Quadrature(rule, panels).integrate(std::forward<F>(f), a, b);
}

/// Iterated integral  int_0^upper int_0^{s1} h(s2) ds2 ds1.
///
/// With CompositeSimpson both levels share one uniform node set: h is sampled
/// at 2*panels + 1 points, the inner integrals are accumulated panel by panel
/// and the outer integral is a Simpson sum over them. With GaussLegendre each
/// outer node gets its own inner rule with `nested_panels` panels.
template <class H>
double iterated_integral(H&& h, double upper, const QuadratureConfig& cfg) {
  if (upper == 0.0) return 0.0;
  if (cfg.rule == QuadratureRule::CompositeSimpson) {
    const int m = cfg.panels;
    const double width = upper / m;
    std::vector<double> samples(2 * m + 1);
    for (int j = 0; j <= 2 * m; ++j) samples[j] = h(upper * (static_cast<double>(j) / (2 * m)));
    double inner = 0.0;
    double outer = 0.0;  // Simpson sum over the cumulative inner integrals
    for (int k = 0; k <= m; ++k) {
      if (k > 0) {
        inner += width / 6.0 *
                 (samples[2 * k - 2] + 4.0 * samples[2 * k - 1] + samples[2 * k]);
      }
      const double w = (k == 0 || k == m) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      outer += w * inner;
    }
    return outer * width / 3.0;
  }
  const Quadrature outer_rule(cfg.rule, cfg.panels);
  const Quadrature inner_rule(cfg.rule, cfg.nested_panels);
  return outer_rule.integrate(
      [&](double s1) { return inner_rule.integrate(h, 0.0, s1); }, 0.0, upper);
}

}  // namespace o2lyap

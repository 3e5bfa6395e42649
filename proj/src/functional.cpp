#include "o2lyap/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "o2lyap/errors.hpp"

namespace o2lyap {

double ScalarField::spacing() const {
  const auto n = static_cast<double>(values.size());
  return bc == BoundaryCondition::Periodic ? domain_length / n : domain_length / (n - 1.0);
}

void ScalarField::validate(bool state) const {
  if (values.size() < kMinPoints) throw ConfigError("ScalarField: need at least 8 grid points");
  if (!(domain_length > 0.0)) throw ConfigError("ScalarField: domain length must be positive");
  if (state && bc == BoundaryCondition::Dirichlet &&
      (values.front() != 0.0 || values.back() != 0.0)) {
    throw ConfigError("ScalarField: Dirichlet state must vanish at both ends");
  }
}

ScalarField gradient(const ScalarField& field) {
  field.validate();
  const std::size_t n = field.size();
  const double h = field.spacing();
  const auto& u = field.values;
  std::vector<double> du(n);
  if (field.bc == BoundaryCondition::Periodic) {
    for (std::size_t i = 0; i < n; ++i) {
      const double right = u[(i + 1) % n];
      const double left = u[(i + n - 1) % n];
      du[i] = (right - left) / (2.0 * h);
    }
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
    du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
  }
  return field.with_values(std::move(du));
}

double grid_integral(const ScalarField& grid, std::span<const double> samples) {
  const double h = grid.spacing();
  double acc = 0.0;
  for (double s : samples) acc += s;
  if (grid.bc != BoundaryCondition::Periodic) acc -= 0.5 * (samples.front() + samples.back());
  return h * acc;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

LagrangianDensity density_of(LagrangianEvaluator& ev) {
  return {[&ev](double, double u, double p) { return ev.lagrangian(u, p); },
          [&ev](double, double u, double p) { return ev.convexity_weight(u, p); }};
}

FunctionalReport evaluate_V(const LagrangianDensity& density, const ScalarField& field) {
  const ScalarField ux = gradient(field);
  const std::size_t n = field.size();
  std::vector<double> integrand(n);
  FunctionalReport rep;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = field.x(i);
    try {
      integrand[i] = density.value(x, field.values[i], ux.values[i]);
      rep.convexity_min =
          std::min(rep.convexity_min, density.convexity(x, field.values[i], ux.values[i]));
    } catch (const Error& e) {
      std::ostringstream os;
      os << "evaluate_V: grid point " << i << ": " << e.what();
      throw GridEvaluationError(os.str(), i);
    }
  }
  rep.V = grid_integral(field, integrand);
  return rep;
}

FunctionalReport evaluate_V(LagrangianEvaluator& ev, const ScalarField& field) {
  return evaluate_V(density_of(ev), field);
}

double dissipation_rate(const LagrangianDensity& density, const ScalarField& field,
                        const ScalarField& u_t,
                        const std::function<double(double, double, double)>& diffusion) {
  if (u_t.size() != field.size() || u_t.bc != field.bc || u_t.domain_length != field.domain_length) {
    throw ConfigError("dissipation_rate: u and u_t must share the grid");
  }
  const ScalarField ux = gradient(field);
  const std::size_t n = field.size();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ut = u_t.values[i];
    if (ut == 0.0) continue;
    const double x = field.x(i);
    const double u = field.values[i];
    const double p = ux.values[i];
    try {
      double w = 1.0;
      if (diffusion) {
        const double a = diffusion(x, u, p);
        if (!(a > 0.0)) {
          std::ostringstream os;
          os << "dissipation_rate: diffusion coefficient " << a << " is not positive";
          throw DomainError(os.str());
        }
        w = 1.0 / a;
      }
      integrand[i] = w * density.convexity(x, u, p) * ut * ut;
    } catch (const DomainError&) {
      throw;
    } catch (const Error& e) {
      std::ostringstream os;
      os << "dissipation_rate: grid point " << i << ": " << e.what();
      throw GridEvaluationError(os.str(), i);
    }
  }
  return -grid_integral(field, integrand);
}

double dissipation_rate(LagrangianEvaluator& ev, const ScalarField& field, const ScalarField& u_t,
                        const std::optional<NonlinearityO2>& weight_a) {
  std::function<double(double, double, double)> diffusion;
  if (weight_a) {
    diffusion = [a = weight_a->f_bar](double, double u, double p) { return a(u, 0.5 * p * p); };
  }
  return dissipation_rate(density_of(ev), field, u_t, diffusion);
}

std::vector<double> centred_rates(const std::vector<double>& times, const std::vector<double>& V) {
  if (times.size() != V.size()) throw ConfigError("centred_rates: size mismatch");
  std::vector<double> out;
  for (std::size_t k = 1; k + 1 < times.size(); ++k) {
    // Three-point derivative, second order on uneven spacing.
    const double h0 = times[k] - times[k - 1];
    const double h1 = times[k + 1] - times[k];
    out.push_back((h0 * h0 * (V[k + 1] - V[k]) + h1 * h1 * (V[k] - V[k - 1])) /
                  (h0 * h1 * (h0 + h1)));
  }
  return out;
}

std::vector<double> decay_residuals(const std::vector<double>& times, const std::vector<double>& V,
                                    const std::vector<double>& rates) {
  if (rates.size() != times.size()) throw ConfigError("decay_residuals: size mismatch");
  const auto dv = centred_rates(times, V);
  std::vector<double> out(dv.size());
  for (std::size_t k = 0; k < dv.size(); ++k) out[k] = std::abs(dv[k] - rates[k + 1]);
  return out;
}

}  // namespace o2lyap

#include "o2lyap/initial.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "o2lyap/errors.hpp"
#include "o2lyap/output.hpp"

namespace o2lyap {

namespace {

// Basis pair (cos-type, sin-type) of mode k at x.
std::pair<double, double> basis(int k, double x, double length, BoundaryCondition bc) {
  const double w = (bc == BoundaryCondition::Periodic ? 2.0 : 1.0) * std::numbers::pi * k / length;
  return {std::cos(w * x), std::sin(w * x)};
}

}  // namespace

void InitialCondition::validate(BoundaryCondition bc) const {
  const bool dirichlet = bc == BoundaryCondition::Dirichlet;
  const bool neumann = bc == BoundaryCondition::Neumann;
  if (dirichlet && offset != 0.0) throw ConfigError("initial: Dirichlet data need offset 0");
  if (taper < 0) throw ConfigError("initial: taper must be >= 0");
  if (taper > 0 && !dirichlet) throw ConfigError("initial: taper applies to Dirichlet data only");
  switch (kind) {
    case InitialKind::FourierMix:
      for (const auto& t : terms) {
        if (t.mode < 0) throw ConfigError("initial: Fourier modes must be >= 0");
        if (dirichlet && (t.cos_amp != 0.0 || t.mode == 0)) {
          throw ConfigError("initial: Dirichlet data use sine terms of mode >= 1 only");
        }
        if (neumann && t.sin_amp != 0.0) {
          throw ConfigError("initial: Neumann data use cosine terms only");
        }
      }
      break;
    case InitialKind::RandomSmooth:
      if (modes < 1) throw ConfigError("initial: random-smooth data need modes >= 1");
      if (!std::isfinite(amplitude) || !std::isfinite(decay)) {
        throw ConfigError("initial: amplitude and decay must be finite");
      }
      break;
    case InitialKind::Import:
      if (path.empty()) throw ConfigError("initial: import needs a snapshot file path");
      break;
  }
}

ScalarField make_initial(const InitialCondition& ic, int n, double length, BoundaryCondition bc) {
  ic.validate(bc);
  ScalarField field;
  field.values.assign(static_cast<std::size_t>(std::max(n, 0)), 0.0);
  field.domain_length = length;
  field.bc = bc;
  field.validate();

  std::vector<FourierTerm> terms;
  if (ic.kind == InitialKind::FourierMix) {
    terms = ic.terms;
  } else if (ic.kind == InitialKind::RandomSmooth) {
    std::mt19937_64 rng(ic.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int k = 1; k <= ic.modes; ++k) {
      const double scale = ic.amplitude / std::pow(static_cast<double>(k), ic.decay);
      const double a = normal(rng);
      const double b = normal(rng);
      terms.push_back({k, bc == BoundaryCondition::Dirichlet ? 0.0 : scale * a,
                       bc == BoundaryCondition::Neumann ? 0.0 : scale * b});
    }
  } else {
    const Snapshot snap = read_snapshot(ic.path, ic.import_time);
    if (snap.u.size() != field.size()) {
      std::ostringstream os;
      os << "initial: imported snapshot has " << snap.u.size() << " points, the run uses "
         << field.size();
      throw ConfigError(os.str());
    }
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (std::abs(snap.x[i] - field.x(i)) > 1e-9 * std::max(1.0, length)) {
        throw ConfigError("initial: imported snapshot lives on a different grid");
      }
    }
    field.values = snap.u;
  }

  if (ic.kind != InitialKind::Import) {
    for (std::size_t i = 0; i < field.size(); ++i) {
      const double x = field.x(i);
      double v = ic.offset;
      for (const auto& t : terms) {
        const auto [c, s] = basis(t.mode, x, length, bc);
        v += t.cos_amp * c + t.sin_amp * s;
      }
      if (ic.taper > 0) v *= std::pow(std::sin(std::numbers::pi * x / length), ic.taper);
      field.values[i] = v;
    }
  }
  if (bc == BoundaryCondition::Dirichlet) {
    field.values.front() = 0.0;
    field.values.back() = 0.0;
  }
  return field;
}

}  // namespace o2lyap

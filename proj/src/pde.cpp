#include "o2lyap/pde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "o2lyap/errors.hpp"

namespace o2lyap {

namespace {

constexpr double kBlowUpBound = 1e6;
// Largest |z| on the negative real axis inside the RK4 stability region.
constexpr double kRk4RealStability = 2.785;

struct Stencil {
  const GeneralNonlinearity& nl;
  const std::optional<PointFunction>& a;
  const ScalarField& grid;
  std::vector<double> x;
  double h;

  Stencil(const GeneralNonlinearity& nl_, const std::optional<PointFunction>& a_,
          const ScalarField& grid_)
      : nl(nl_), a(a_), grid(grid_), x(grid_.size()), h(grid_.spacing()) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = grid.x(i);
  }

  // Neighbour values with the boundary ghosts applied.
  std::pair<double, double> neighbours(const std::vector<double>& u, std::size_t i) const {
    const std::size_t n = u.size();
    switch (grid.bc) {
      case BoundaryCondition::Periodic:
        return {u[(i + n - 1) % n], u[(i + 1) % n]};
      case BoundaryCondition::Neumann:
        return {i == 0 ? u[1] : u[i - 1], i + 1 == n ? u[n - 2] : u[i + 1]};
      case BoundaryCondition::Dirichlet:
        return {i == 0 ? 0.0 : u[i - 1], i + 1 == n ? 0.0 : u[i + 1]};
    }
    return {0.0, 0.0};
  }

  bool pinned(std::size_t i) const {
    return grid.bc == BoundaryCondition::Dirichlet && (i == 0 || i + 1 == x.size());
  }

  // out = a u_xx + f, or only f (plus nothing else) when `reaction_only`.
  void apply(const std::vector<double>& u, std::vector<double>& out, bool reaction_only) const {
    const std::size_t n = u.size();
    const double inv2h = 1.0 / (2.0 * h);
    const double invh2 = 1.0 / (h * h);
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned(i)) {
        out[i] = 0.0;
        continue;
      }
      const auto [left, right] = neighbours(u, i);
      const double p = (right - left) * inv2h;
      double value = nl.f(x[i], u[i], p);
      if (!reaction_only) {
        const double uxx = (right - 2.0 * u[i] + left) * invh2;
        const double coeff = a ? (*a)(x[i], u[i], p) : 1.0;
        value += coeff * uxx;
      }
      if (!std::isfinite(value)) {
        std::ostringstream os;
        os << "rhs: non-finite value at grid index " << i << " (x = " << x[i] << ")";
        throw NonFiniteState(os.str(), i);
      }
      out[i] = value;
    }
  }
};

// Solves (alpha I - beta D2) v = b with the field's boundary handling.
// D2 is the three-point Laplacian; Dirichlet end values are fixed to 0.
class ImplicitDiffusion {
 public:
  ImplicitDiffusion(const ScalarField& grid, double alpha, double beta)
      : bc_(grid.bc), n_(grid.size()) {
    const double h = grid.spacing();
    diag_ = alpha + 2.0 * beta / (h * h);
    off_ = -beta / (h * h);
  }

  void solve(std::vector<double>& b) const {
    switch (bc_) {
      case BoundaryCondition::Periodic:
        solve_cyclic(b);
        break;
      case BoundaryCondition::Dirichlet: {
        std::vector<double> lo(n_ - 2, off_), di(n_ - 2, diag_), up(n_ - 2, off_);
        std::vector<double> rhs(b.begin() + 1, b.end() - 1);
        thomas(lo, di, up, rhs);
        std::copy(rhs.begin(), rhs.end(), b.begin() + 1);
        b.front() = 0.0;
        b.back() = 0.0;
        break;
      }
      case BoundaryCondition::Neumann: {
        std::vector<double> lo(n_, off_), di(n_, diag_), up(n_, off_);
        up[0] = 2.0 * off_;
        lo[n_ - 1] = 2.0 * off_;
        thomas(lo, di, up, b);
        break;
      }
    }
  }

 private:
  // lo[i] multiplies x[i-1], up[i] multiplies x[i+1].
  static void thomas(std::vector<double> lo, std::vector<double> di, std::vector<double> up,
                     std::vector<double>& rhs) {
    const std::size_t n = di.size();
    for (std::size_t i = 1; i < n; ++i) {
      const double m = lo[i] / di[i - 1];
      di[i] -= m * up[i - 1];
      rhs[i] -= m * rhs[i - 1];
    }
    rhs[n - 1] /= di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
  }

  // Sherman-Morrison for the circulant tridiagonal matrix.
  void solve_cyclic(std::vector<double>& b) const {
    const std::size_t n = n_;
    const double gamma = -diag_;
    std::vector<double> lo(n, off_), di(n, diag_), up(n, off_);
    di[0] -= gamma;
    di[n - 1] -= off_ * off_ / gamma;
    std::vector<double> y = b;
    thomas(lo, di, up, y);
    std::vector<double> z(n, 0.0);
    z[0] = gamma;
    z[n - 1] = off_;
    thomas(lo, di, up, z);
    const double fact = (y[0] + off_ * y[n - 1] / gamma) / (1.0 + z[0] + off_ * z[n - 1] / gamma);
    for (std::size_t i = 0; i < n; ++i) b[i] = y[i] - fact * z[i];
  }

  BoundaryCondition bc_;
  std::size_t n_;
  double diag_ = 0.0;
  double off_ = 0.0;
};

bool blown_up(const std::vector<double>& u) {
  for (double v : u) {
    if (!std::isfinite(v) || std::abs(v) > kBlowUpBound) return true;
  }
  return false;
}

}  // namespace

GeneralNonlinearity from_o2(const NonlinearityO2& nl) {
  GeneralNonlinearity g;
  g.label = nl.label;
  g.f = [fb = nl.f_bar](double, double u, double p) { return fb(u, 0.5 * p * p); };
  g.f_p = [fq = nl.f_bar_q](double, double u, double p) { return p * fq(u, 0.5 * p * p); };
  return g;
}

void SolverConfig::validate() const {
  if (n < static_cast<int>(ScalarField::kMinPoints)) throw ConfigError("SolverConfig: n must be >= 8");
  if (dt < 0.0 || !std::isfinite(dt)) throw ConfigError("SolverConfig: dt must be positive (or 0 for the default)");
  if (!(t_end > 0.0)) throw ConfigError("SolverConfig: t_end must be positive");
  if (save_every < 1) throw ConfigError("SolverConfig: save_every must be >= 1");
  if (!(diffusion > 0.0)) throw ConfigError("SolverConfig: diffusion must be positive");
}

double default_time_step(const ScalarField& grid, double a_max) {
  const double h = grid.spacing();
  return 0.4 * h * h / a_max;
}

ScalarField rhs(const GeneralNonlinearity& nl, const std::optional<PointFunction>& a,
                const ScalarField& field) {
  field.validate();
  Stencil st(nl, a, field);
  std::vector<double> out(field.size());
  st.apply(field.values, out, false);
  return field.with_values(std::move(out));
}

TrajectoryRecord integrate(const GeneralNonlinearity& nl, const std::optional<PointFunction>& a,
                           const ScalarField& u0, const SolverConfig& cfg) {
  cfg.validate();
  u0.validate(true);
  if (static_cast<std::size_t>(cfg.n) != u0.size()) {
    throw ConfigError("integrate: initial field size differs from SolverConfig::n");
  }
  if (cfg.scheme == Scheme::IMEXDiffusion && a) {
    throw ConfigError("integrate: the IMEX scheme needs a constant diffusion coefficient");
  }

  // With a callable coefficient the default diffusion entry is not meaningful;
  // use the coefficient's largest value on the initial state.
  std::optional<PointFunction> coeff = a;
  if (!coeff && cfg.diffusion != 1.0) {
    coeff = [d = cfg.diffusion](double, double, double) { return d; };
  }
  double a_max = cfg.diffusion;
  if (a) {
    const ScalarField ux = gradient(u0);
    a_max = 0.0;
    for (std::size_t i = 0; i < u0.size(); ++i) {
      a_max = std::max(a_max, (*a)(u0.x(i), u0.values[i], ux.values[i]));
    }
  }

  const double dt_request = cfg.dt > 0.0 ? cfg.dt : default_time_step(u0, a_max);
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / dt_request - 1e-9)));
  const double dt = cfg.t_end / steps;

  TrajectoryRecord rec;
  const double h = u0.spacing();
  if (cfg.scheme == Scheme::RK4Explicit && dt * a_max * 4.0 / (h * h) > kRk4RealStability) {
    std::ostringstream os;
    os << "time step " << dt << " exceeds the RK4 diffusion stability limit "
       << kRk4RealStability * h * h / (4.0 * a_max);
    rec.warnings.push_back(os.str());
  }

  Stencil st(nl, coeff, u0);
  const std::size_t n = u0.size();
  std::vector<double> u = u0.values;

  const auto save = [&](double t) {
    std::vector<double> ut(n);
    st.apply(u, ut, false);
    rec.times.push_back(t);
    rec.snapshots.push_back(u0.with_values(u));
    rec.u_t_snapshots.push_back(u0.with_values(std::move(ut)));
  };
  const auto fail = [&](double t) {
    rec.status = RunStatus::BlowUp;
    rec.blowup_time = t;
  };

  try {
    save(0.0);
  } catch (const NonFiniteState&) {
    fail(0.0);
    return rec;
  }

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  std::vector<double> u_prev, f_prev(n), f_now(n);
  std::optional<ImplicitDiffusion> euler_solver, bdf2_solver;
  if (cfg.scheme == Scheme::IMEXDiffusion) {
    euler_solver.emplace(u0, 1.0 / dt, cfg.diffusion);
    bdf2_solver.emplace(u0, 1.5 / dt, cfg.diffusion);
  }

  for (long step = 1; step <= steps; ++step) {
    const double t = step == steps ? cfg.t_end : dt * static_cast<double>(step);
    try {
      if (cfg.scheme == Scheme::RK4Explicit) {
        st.apply(u, k1, false);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
        st.apply(tmp, k2, false);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
        st.apply(tmp, k3, false);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] + dt * k3[i];
        st.apply(tmp, k4, false);
        for (std::size_t i = 0; i < n; ++i) {
          u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
      } else {
        st.apply(u, f_now, true);
        if (step == 1) {
          // First step: implicit-explicit Euler.
          for (std::size_t i = 0; i < n; ++i) tmp[i] = u[i] / dt + f_now[i];
          euler_solver->solve(tmp);
        } else {
          for (std::size_t i = 0; i < n; ++i) {
            tmp[i] = (4.0 * u[i] - u_prev[i]) / (2.0 * dt) + 2.0 * f_now[i] - f_prev[i];
          }
          bdf2_solver->solve(tmp);
        }
        u_prev = u;
        f_prev.swap(f_now);
        u.swap(tmp);
      }
      if (blown_up(u)) {
        fail(t);
        return rec;
      }
      if (step % cfg.save_every == 0 || step == steps) save(t);
    } catch (const NonFiniteState&) {
      fail(t);
      return rec;
    }
  }
  return rec;
}

}  // namespace o2lyap

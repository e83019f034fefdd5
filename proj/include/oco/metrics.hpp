#pragma once

#include <cmath>
#include <vector>

#include "oco/oracle.hpp"
#include "oco/problem.hpp"
#include "oco/trace.hpp"

namespace oco {

inline double compute_chi(const AssumptionConstants& c, const BregmanGenerator& psi,
                          const BregmanGenerator& phi) {
  return 6.0 * c.G_star * c.G_star / phi.sigma() + 3.0 * c.F_star * c.D +
         psi.smoothness() * c.D * c.D / 2.0;
}

inline double compute_E(double chi, const AssumptionConstants& c, const BregmanGenerator& phi) {
  const double ratio = 2.0 * chi / c.eta;
  return std::sqrt(phi.smoothness() / phi.sigma() * ratio * ratio + 2.0 / phi.sigma() * chi);
}

/// chi and E plus everything needed to evaluate the bounds.
struct TheoremConstants {
  double chi{0.0};
  double E{0.0};
  AssumptionConstants consts;
  double sigma_psi{1.0}, L_psi{1.0};
  double sigma_phi{1.0}, L_phi{1.0};

  static TheoremConstants from(const ProblemSpec& spec) {
    TheoremConstants tc;
    tc.consts = spec.consts;
    tc.sigma_psi = spec.psi.sigma();
    tc.L_psi = spec.psi.smoothness();
    tc.sigma_phi = spec.phi.sigma();
    tc.L_phi = spec.phi.smoothness();
    tc.chi = compute_chi(spec.consts, spec.psi, spec.phi);
    tc.E = compute_E(tc.chi, spec.consts, spec.phi);
    return tc;
  }
};

inline double sum_rho(long T, double epsilon) {
  double s = 0.0;
  for (long t = 1; t <= T; ++t) s += std::pow(static_cast<double>(t), -epsilon);
  return s;
}

/// (1/rho_T)(L_psi D^2/2 + L_phi E^2/2) + (2F*^2/sigma_psi + 2G*^2/sigma_phi) sum rho_t,
/// with the rate sum evaluated literally.
inline double regret_bound(long T, double epsilon, const TheoremConstants& tc) {
  const double inv_rho_T = std::pow(static_cast<double>(T), epsilon);
  const double lead = tc.L_psi * tc.consts.D * tc.consts.D / 2.0 + tc.L_phi * tc.E * tc.E / 2.0;
  const double tail = 2.0 * tc.consts.F_star * tc.consts.F_star / tc.sigma_psi +
                      2.0 * tc.consts.G_star * tc.consts.G_star / tc.sigma_phi;
  return inv_rho_T * lead + tail * sum_rho(T, epsilon);
}

/// G + (L_phi / (2 rho_T)) E
inline double violation_bound(long T, double epsilon, const TheoremConstants& tc) {
  const double inv_rho_T = std::pow(static_cast<double>(T), epsilon);
  return tc.consts.G + tc.L_phi / 2.0 * inv_rho_T * tc.E;
}

struct MonitorBreach {
  int t{0};
  double observed{0.0};
  double bound{0.0};
};

struct MonitorReport {
  bool pass{true};
  double max_observed{0.0};
  int argmax_t{0};
  double max_slack{std::numeric_limits<double>::infinity()};  // min over prefixes of bound - observed
  std::vector<MonitorBreach> breaches;
};

/// Per-prefix check of V(T') <= G + (L_phi/(2 rho_{T'})) ||y_{T'}||, using the
/// rate each prefix actually ran with (covers the constant-rate baseline too).
inline MonitorReport proposition1_monitor(const RunTrace& trace, const TheoremConstants& tc,
                                          double tol = 1e-9) {
  MonitorReport rep;
  for (int T = 1; T <= trace.horizon(); ++T) {
    const auto& r = trace.rounds[static_cast<std::size_t>(T) - 1];
    const double v = violation(trace, T);
    const double bound = tc.consts.G + tc.L_phi / (2.0 * r.rho) * norm2(r.y);
    if (v > rep.max_observed) {
      rep.max_observed = v;
      rep.argmax_t = T;
    }
    rep.max_slack = std::min(rep.max_slack, bound - v);
    if (v > bound + tol) {
      rep.pass = false;
      if (rep.breaches.size() < 16) rep.breaches.push_back({T, v, bound});
    }
  }
  return rep;
}

/// ||y_t|| <= E for every round.
inline MonitorReport dual_bound_monitor(const RunTrace& trace, const TheoremConstants& tc,
                                        double tol = 1e-9) {
  MonitorReport rep;
  for (const auto& r : trace.rounds) {
    const double ny = norm2(r.y);
    if (ny > rep.max_observed) {
      rep.max_observed = ny;
      rep.argmax_t = r.t;
    }
    rep.max_slack = std::min(rep.max_slack, tc.E - ny);
    if (ny > tc.E + tol) {
      rep.pass = false;
      if (rep.breaches.size() < 16) rep.breaches.push_back({r.t, ny, tc.E});
    }
  }
  return rep;
}

struct Lemma5Result {
  double sum_rho{0.0};
  double sum_rho_sq{0.0};
  bool pass{false};
};

/// Window sums over S = {t, ..., t + ceil(t^eps)} with rho_i = i^{-eps}:
/// log 2 <= sum rho_i <= 3 and sum rho_i^2 <= 3.
inline Lemma5Result lemma5_check(long t, double epsilon) {
  if (t < 1) throw std::invalid_argument("lemma5_check: t must be >= 1");
  if (!(epsilon >= 0.0) || epsilon >= 1.0) throw std::invalid_argument("lemma5_check: epsilon in [0,1)");
  const long width = static_cast<long>(std::ceil(std::pow(static_cast<double>(t), epsilon)));
  Lemma5Result r;
  for (long i = t; i <= t + width; ++i) {
    const double rho = std::pow(static_cast<double>(i), -epsilon);
    r.sum_rho += rho;
    r.sum_rho_sq += rho * rho;
  }
  r.pass = r.sum_rho >= std::log(2.0) && r.sum_rho <= 3.0 && r.sum_rho_sq <= 3.0;
  return r;
}

struct Corollary2Report {
  std::vector<long> T_grid;
  std::vector<double> optimality_gap;    // f(x_bar_T) - f*
  std::vector<double> violation_norm;    // ||[g(x_bar_T)+b]^+||
  double gap_exponent{0.0};              // log-log slope across the grid
  double violation_exponent{0.0};
};

inline double loglog_slope(const std::vector<long>& T, const std::vector<double>& v,
                           double floor_value = 1e-12) {
  if (T.size() != v.size() || T.size() < 2) throw std::invalid_argument("loglog_slope: bad series");
  const std::size_t n = T.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(T[i]));
    const double y = std::log(std::max(v[i], floor_value));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Decay report for the static mode: gaps on a horizon grid and their fitted
/// log-log exponents. Pass |f(x_bar) - f*| when the average can beat f* by
/// slight infeasibility; exact zeros are floored inside the fit.
inline Corollary2Report corollary2_report(const std::vector<long>& T_grid,
                                          const std::vector<double>& gaps,
                                          const std::vector<double>& violations) {
  Corollary2Report rep;
  rep.T_grid = T_grid;
  rep.optimality_gap = gaps;
  rep.violation_norm = violations;
  rep.gap_exponent = loglog_slope(T_grid, gaps);
  rep.violation_exponent = loglog_slope(T_grid, violations);
  return rep;
}

}  // namespace oco

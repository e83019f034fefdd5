#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "oco/stream.hpp"

namespace oco {

/// splitmix64; integer state only, so emissions are bit-identical across platforms.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1): top 53 bits
  double u01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

namespace detail {

// Shared skeleton for the linear-cost streams over C = [0,1]^n with the single
// constraint g(x) = -<a, x>. Draws l_t lazily in round order so that emissions
// depend only on (seed, n) and the played actions.
class LinearCostStream : public ScenarioStream {
 public:
  LinearCostStream(int n, std::uint64_t seed, ProblemSpec spec, Vec a)
      : prng_(seed), n_(n), a_(std::move(a)), spec_(std::move(spec)) {}

  const ProblemSpec& problem() const override { return spec_; }

  void observe_action(int t, const Vec& x) override {
    require_round(t);
    if (static_cast<int>(played_.size()) + 1 != t) {
      throw std::logic_error("stream: actions must be observed in round order");
    }
    played_.push_back(x);
  }

  double cost_value(int t, const Vec& x) override { return dot(cost_coeffs(t), x); }

  Vec cost_subgradient(int t, const Vec& x) override {
    (void)x;
    return cost_coeffs(t);
  }

  std::optional<Vec> linear_cost_coefficients(int t) override { return cost_coeffs(t); }

  Vec perturbation(int t) override {
    const double b = perturbation_scalar(t);
    // Slater margin must hold for every emission: g(x_hat) + b + eta <= 0.
    const double slack =
        -dot(a_, spec_.consts.slater_point) + b + spec_.consts.eta;
    if (slack > 1e-12) {
      throw std::logic_error("stream: emitted perturbation violates the declared Slater margin");
    }
    return Vec{b};
  }

  const Vec& efficiency() const { return a_; }

 protected:
  virtual double perturbation_scalar(int t) = 0;

  const Vec& cost_coeffs(int t) {
    require_round(t);
    while (static_cast<int>(ls_.size()) < t) {
      Vec l(n_);
      for (int i = 0; i < n_; ++i) l[i] = draw_cost_entry();
      ls_.push_back(std::move(l));
    }
    return ls_[static_cast<std::size_t>(t) - 1];
  }

  virtual double draw_cost_entry() { return prng_.u01(); }

  const Vec& played(int t) const { return played_[static_cast<std::size_t>(t) - 1]; }
  int rounds_played() const { return static_cast<int>(played_.size()); }

  Prng prng_;
  int n_;
  Vec a_;
  ProblemSpec spec_;

 private:
  static void require_round(int t) {
    if (t < 1) throw std::invalid_argument("stream: round index must be >= 1");
  }

  std::vector<Vec> ls_;
  std::vector<Vec> played_;
};

inline ProblemSpec make_linear_spec(int n, const Vec& a, double G, double G_star, double eta) {
  Matrix A(1, n);
  for (int j = 0; j < n; ++j) A(0, j) = -a[j];
  AssumptionConstants c;
  c.D = std::sqrt(static_cast<double>(n));
  c.F_star = std::sqrt(static_cast<double>(n));
  c.G = G;
  c.G_star = G_star;
  c.eta = eta;
  c.slater_point = Vec(static_cast<std::size_t>(n), 1.0);
  return ProblemSpec(ActionSet::unit_box(n), ConstraintMap::affine(std::move(A), Vec{0.0}),
                     BregmanGenerator::half_sq_euclidean(), BregmanGenerator::half_sq_euclidean(),
                     std::move(c));
}

inline Vec draw_efficiency(Prng& prng, int n) {
  Vec a(n);
  for (int i = 0; i < n; ++i) a[i] = 0.5 + prng.u01();  // uniform [0.5, 1.5)
  return a;
}

class DatacenterStream final : public LinearCostStream {
 public:
  static std::unique_ptr<DatacenterStream> make(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("datacenter_scenario: n must be >= 1");
    Prng prng(seed);
    Vec a = draw_efficiency(prng, n);
    const double sum_a = sum(a);
    const double G = norm2(a) * std::sqrt(static_cast<double>(n)) + 0.5 * sum_a;
    const double eta = 0.5 * sum_a - 1e-6;
    ProblemSpec spec = make_linear_spec(n, a, G, G, eta);
    return std::unique_ptr<DatacenterStream>(
        new DatacenterStream(n, seed, std::move(spec), std::move(a)));
  }

 protected:
  // b_t = 0.5 <1,a> exp(-<l_{t-1}, x_{t-1}>), with l_0 = 0, x_0 = 0.
  double perturbation_scalar(int t) override {
    const double half = 0.5 * sum(a_);
    if (t == 1) return half;
    if (rounds_played() < t - 1) {
      throw std::logic_error("datacenter stream: b_t requires the action of round t-1");
    }
    return half * std::exp(-dot(cost_coeffs(t - 1), played(t - 1)));
  }

 private:
  DatacenterStream(int n, std::uint64_t seed, ProblemSpec spec, Vec a)
      : LinearCostStream(n, seed, std::move(spec), std::move(a)) {
    // the spec-level draws consumed the first n outputs; replay them here so the
    // lazily drawn l_t continue the same stream
    for (int i = 0; i < n; ++i) prng_.u01();
  }
};

class AllFeasibleStream final : public LinearCostStream {
 public:
  static std::unique_ptr<AllFeasibleStream> make(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("all_feasible_scenario: n must be >= 1");
    Prng prng(seed);
    Vec a = draw_efficiency(prng, n);
    const double sum_a = sum(a);
    const double G = 2.0 * sum_a + 0.2;
    ProblemSpec spec = make_linear_spec(n, a, G, G, sum_a);
    return std::unique_ptr<AllFeasibleStream>(
        new AllFeasibleStream(n, seed, std::move(spec), std::move(a)));
  }

 protected:
  // b_t <= -<a,1> - 0.05, so g(x) + b_t <= -0.05 on all of C.
  double perturbation_scalar(int t) override {
    while (static_cast<int>(bs_.size()) < t) {
      bs_.push_back(-sum(a_) - 0.1 + 0.05 * jitter_.u01());
    }
    return bs_[static_cast<std::size_t>(t) - 1];
  }

 private:
  AllFeasibleStream(int n, std::uint64_t seed, ProblemSpec spec, Vec a)
      : LinearCostStream(n, seed, std::move(spec), std::move(a)), jitter_(seed ^ 0xA5A5A5A5A5A5A5A5ULL) {
    for (int i = 0; i < n; ++i) prng_.u01();
  }

  Prng jitter_;
  std::vector<double> bs_;
};

class StaticLpStream final : public LinearCostStream {
 public:
  StaticLpStream(int n, std::uint64_t seed, ProblemSpec spec, Vec a, Vec L, double b)
      : LinearCostStream(n, seed, std::move(spec), std::move(a)), L_(std::move(L)), b_(b) {}

  double b_value() const { return b_; }
  const Vec& cost() const { return L_; }

 protected:
  double perturbation_scalar(int) override { return b_; }
  double draw_cost_entry() override { return 0.0; }  // unused; coefficients overridden below

  const Vec& cost_coeffs_static() const { return L_; }

 public:
  double cost_value(int, const Vec& x) override { return dot(L_, x); }
  Vec cost_subgradient(int, const Vec&) override { return L_; }
  std::optional<Vec> linear_cost_coefficients(int) override { return L_; }

 private:
  Vec L_;
  double b_;
};

}  // namespace detail

/// Feedback-coupled datacenter workload: linear costs l_t ~ U[0,1)^n, covering
/// constraint b_t <= <a, x_t> with arrivals damped by the previous round's load.
inline std::unique_ptr<ScenarioStream> datacenter_scenario(int n, std::uint64_t seed) {
  return detail::DatacenterStream::make(n, seed);
}

/// Frozen costs and perturbation; constraints strictly inactive on all of C,
/// so the dual never activates.
inline std::unique_ptr<ScenarioStream> all_feasible_scenario(int n, std::uint64_t seed) {
  return detail::AllFeasibleStream::make(n, seed);
}

struct StaticLpScenario {
  std::unique_ptr<ScenarioStream> stream;
  double f_star{0.0};
  Vec minimizer;
  Vec cost;
  Vec efficiency;
  double b{0.0};
};

/// Static LP: f(x) = <L, x> with L ~ U[0,1)^n drawn once, b = half the full
/// capacity. f* comes from the exact fractional-knapsack route.
StaticLpScenario static_lp_scenario(int n, std::uint64_t seed);

}  // namespace oco

#include "oco/oracle.hpp"

namespace oco {

inline StaticLpScenario static_lp_scenario(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("static_lp_scenario: n must be >= 1");
  Prng prng(seed);
  Vec a = detail::draw_efficiency(prng, n);
  Vec L(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) L[i] = prng.u01();
  const double sum_a = sum(a);
  const double b = 0.5 * sum_a;
  const double G = norm2(a) * std::sqrt(static_cast<double>(n)) + b;
  const double eta = 0.5 * sum_a - 1e-6;
  ProblemSpec spec = detail::make_linear_spec(n, a, G, G, eta);

  StaticLpScenario out;
  FeasibleSetSpec fs{spec.action_set, spec.constraints, Vec{b}};
  HindsightResult hr = hindsight_cost(OfflineObjective::linear(L), fs);
  out.f_star = hr.value;
  out.minimizer = std::move(hr.minimizer);
  out.cost = L;
  out.efficiency = a;
  out.b = b;
  out.stream = std::make_unique<detail::StaticLpStream>(n, seed, std::move(spec), std::move(a),
                                                        std::move(L), b);
  return out;
}

}  // namespace oco

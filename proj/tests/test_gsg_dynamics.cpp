#include <gtest/gtest.h>

#include "gsg/entanglement.hpp"
#include "gsg/gsg_dynamics.hpp"
#include "oracles.hpp"

using namespace gsg;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  const double top = *std::max_element(y.begin(), y.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1] && y[i] > 1e-3 * top) out.push_back(i);
  return out;
}

}  // namespace

TEST(Coupling, LinearInGradient) {
  EXPECT_EQ(coupling_from_gradient(1e-14, 2.0, 0.0, 2.0).coupling, 0.0);
  const auto a = coupling_from_gradient(1e-14, 2.0, 1e-3, 2.0);
  const auto b = coupling_from_gradient(1e-14, 2.0, 2e-3, 2.0);
  EXPECT_NEAR(b.coupling / a.coupling, 2.0, 1e-14);
  EXPECT_DOUBLE_EQ(a.splitting_time, kPi / 2.0);
  EXPECT_DOUBLE_EQ(a.k, a.coupling / 2.0);
  EXPECT_THROW(coupling_from_gradient(0.0, 1.0, 1.0, 2.0), DomainError);
  EXPECT_THROW(coupling_from_gradient(1e-14, -1.0, 1.0, 2.0), DomainError);
}

TEST(Coupling, MatchesDirectEvaluation) {
  for (double grad : {1e-4, 3e-3, 0.7}) {
    const double m = 3e-15, w = 0.4, gl = 2.0;
    const double direct = gl * oracle::kMuB * std::sqrt(1.0 / (2.0 * oracle::kHbar * m * w)) * grad;
    EXPECT_NEAR(coupling_from_gradient(m, w, grad, gl).coupling / direct, 1.0, 1e-12);
  }
}

TEST(Coupling, ChainReproducesPresetSplitting) {
  const auto d = std::get<DiamagneticDerivation>(diamagnetic_params(6e-9, 1e-14, 3e-3, 2.0));
  const GsgParams p = coupling_from_gradient(1e-14, d.trap_frequency, 3e-3, 2.0);
  const double w = d.trap_frequency;
  const double dx = 2.0 * std::sqrt(2.0 * oracle::kHbar / (1e-14 * w)) * p.coupling / w;
  EXPECT_NEAR(dx / d.delta_x, 1.0, 1e-12);
  EXPECT_NEAR(superposition_extent(p, Spin::from_twice(1)).delta_x / dx, 1.0, 1e-12);
  EXPECT_NEAR(dx, 2.5e-4, 0.05 * 2.5e-4);
}

TEST(CouplingRatio, BackSolvesGradient) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, 2.0);
  EXPECT_NEAR(p.k, 2.0, 1e-12);
  EXPECT_NEAR(coupling_from_gradient(1e-14, 1.0, p.gradient, 2.0).k, 2.0, 1e-12);
}

TEST(Diamagnetic, FormulasAndGradientInvariance) {
  const double chi = 6e-9, m = 1e-14;
  const auto a = std::get<DiamagneticDerivation>(diamagnetic_params(chi, m, 1e-3, 2.0));
  const auto b = std::get<DiamagneticDerivation>(diamagnetic_params(-chi, m, 5e-2, 2.0));
  EXPECT_NEAR(a.trap_frequency, std::sqrt(chi / oracle::kMu0) * 1e-3, 1e-18);
  EXPECT_NEAR(a.splitting_time * 1e-3 / (b.splitting_time * 5e-2), 1.0, 1e-12);
  EXPECT_NEAR(a.delta_x * 1e-3 / (b.delta_x * 5e-2), 1.0, 1e-12);
  EXPECT_NEAR(a.splitting_time * 1e-3, kPi * std::sqrt(oracle::kMu0 / chi), 1e-9);
  EXPECT_NEAR(a.delta_x * 1e-3, 2 * 2 * oracle::kMuB * oracle::kMu0 / (m * chi), 1e-18);
  EXPECT_TRUE(std::holds_alternative<UnboundedSplittingTime>(diamagnetic_params(chi, m, 0.0, 2.0)));
  EXPECT_THROW(diamagnetic_params(0.0, m, 1e-3, 2.0), DomainError);
}

TEST(Trajectories, ClosedLoop) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, 0.7);
  const Spin j = Spin::from_twice(5);
  const auto t0 = branch_trajectories(p, j, 0.0);
  const auto ts = branch_trajectories(p, j, p.splitting_time);
  const auto t2 = branch_trajectories(p, j, 2 * p.splitting_time);
  const double dx = superposition_extent(p, j).delta_x;
  for (int i = 0; i < j.dim(); ++i) {
    const double m = j.m(i);
    EXPECT_EQ(t0.alpha[i], cplx(0.0));
    EXPECT_NEAR(std::abs(ts.alpha[i] - cplx(2 * m * p.k, 0.0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(t2.alpha[i]), 0.0, 1e-12);
    EXPECT_NEAR(ts.position[i], m * dx, 1e-12 * dx);
    EXPECT_NEAR(ts.momentum[i], 0.0, 1e-12 * std::abs(t0.momentum[0]) + 1e-30);
  }
}

TEST(Trajectories, Symmetries) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 3.0, 1.3);
  for (int tj : {2, 3, 8}) {
    const Spin j = Spin::from_twice(tj);
    for (double t : {0.1, 0.77, 1.9}) {
      const auto b = branch_trajectories(p, j, t);
      for (int i = 0; i < j.dim(); ++i) {
        const int mirror = j.dim() - 1 - i;
        EXPECT_EQ(b.alpha[i], -b.alpha[mirror]);
        EXPECT_EQ(b.position[i], -b.position[mirror]);
        EXPECT_EQ(b.phase[i], b.phase[mirror]);
      }
      if (j.is_integer()) {
        EXPECT_EQ(b.position[tj / 2], 0.0);
      }
    }
  }
  EXPECT_THROW(branch_trajectories(p, Spin::from_twice(1), -1.0), DomainError);
}

TEST(SuperpositionExtent, ScalesWithSpin) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, 2.0);
  const auto half = superposition_extent(p, Spin::from_twice(1));
  const auto ten = superposition_extent(p, Spin::from_twice(20));
  EXPECT_DOUBLE_EQ(half.delta_d, half.delta_x);
  EXPECT_DOUBLE_EQ(ten.delta_d / half.delta_d, 20.0);
  EXPECT_EQ(half.delta_x, ten.delta_x);
  EXPECT_EQ(p.splitting_time, params_from_coupling_ratio(1e-14, 1.0, 5.0).splitting_time);
}

TEST(PositionDensity, GroundStateFollowsLowestBranch) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, 2.0);
  const Spin j = Spin::from_twice(4);
  const double t = 0.6 * p.splitting_time;
  const double xm = branch_trajectories(p, j, t).position[0];
  const auto x = grid(xm - 8 * p.sigma_x(), xm + 8 * p.sigma_x(), 801);
  const auto rho = position_density(ground_state(j), p, t, x);
  const auto peaks = local_maxima(rho);
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_NEAR(x[peaks[0]], xm, x[1] - x[0]);
}

TEST(PositionDensity, ElevenPeaksAtSplittingTime) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, 2.0);
  const Spin j = Spin::from_twice(10);
  const SpinState css = coherent_spin_state(j, kPi / 2, 0.0);
  const auto ext = superposition_extent(p, j);
  const double span = ext.delta_d + 6 * p.sigma_x();
  const auto x = grid(-span, span, 4001);
  const auto rho = position_density(css, p, p.splitting_time, x);
  const auto peaks = local_maxima(rho);
  ASSERT_EQ(peaks.size(), 11u);
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_NEAR(x[peaks[i]] - x[peaks[i - 1]], ext.delta_x, x[1] - x[0]);
  // Peak heights follow the binomial weights.
  const double norm = 1.0 / (p.sigma_x() * std::sqrt(2 * kPi));
  for (int i = 0; i < 11; ++i)
    EXPECT_NEAR(rho[peaks[i]] / norm, oracle::binomial(10, i) / 1024.0, 1e-3);
  EXPECT_NEAR(trapezoid(x, rho), 1.0, 1e-6);

  const auto closed = position_density(css, p, 2 * p.splitting_time, x);
  const auto one = local_maxima(closed);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(x[one[0]], 0.0, x[1] - x[0]);
}

TEST(PositionDensity, RejectsBadGrids) {
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, 2.0);
  const SpinState s = ground_state(1.0);
  EXPECT_THROW(position_density(s, p, 0.0, std::vector<double>{}), DomainError);
  EXPECT_THROW(position_density(s, p, 0.0, std::vector<double>{0.0, 0.0}), DomainError);
}

TEST(SplitState, PhasesAndPositions) {
  const SpinState s = coherent_spin_state(2.0, 1.1, 0.4);
  const auto same = split_state(s, params_from_coupling_ratio(1e-14, 1.0, 0.0));
  EXPECT_EQ(same.spin.amplitudes(), s.amplitudes());

  const SpinState h = coherent_spin_state(0.5, 0.8, 0.0);
  const double k = 0.37;
  const auto sh = split_state(h, params_from_coupling_ratio(1e-14, 1.0, k));
  const cplx g = std::exp(I * (kPi * k * k / 4));
  EXPECT_LT((sh.spin.amplitudes() - g * h.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);

  const auto p1 = params_from_coupling_ratio(1e-14, 1.0, 1.0);
  const auto s2 = split_state(coherent_spin_state(2.0, kPi / 2, 0.0), p1);
  const double signs[] = {1, -1, 1, -1, 1};
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(std::abs(s2.spin[i] - signs[i] * coherent_spin_state(2.0, kPi / 2, 0.0)[i]), 0.0, 1e-12);
    EXPECT_NEAR(s2.branch_positions[i], (i - 2) * superposition_extent(p1, Spin::from_twice(4)).delta_x, 1e-25);
  }

  // Same relative phases read off the truncated-Fock evolution at t_s.
  const SpinState in = coherent_spin_state(2.0, kPi / 2, 0.0);
  const auto evo = fock_oracle_evolve(in, 1.0, kPi, default_fock_truncation(in.spin(), 1.0));
  for (int i = 0; i < 5; ++i) {
    const CVector coh = coherent_fock_amplitudes(cplx(2.0 * (i - 2), 0.0), evo.n_fock);
    const cplx proj = coh.dot(evo.branch(i));
    EXPECT_NEAR(std::abs(proj / std::abs(proj) - signs[i]), 0.0, 1e-8);
  }
}

TEST(RecombineState, LoopPhases) {
  const SpinState s = coherent_spin_state(1.5, 1.0, 0.3);
  const auto zero = recombine_state(split_state(s, params_from_coupling_ratio(1e-14, 1.0, 0.0)));
  EXPECT_EQ(zero.amplitudes(), s.amplitudes());

  const double k = 0.6;
  const auto r = recombine_state(split_state(s, params_from_coupling_ratio(1e-14, 1.0, k)));
  for (int i = 0; i < s.dim(); ++i) {
    const double m = s.spin().m(i);
    EXPECT_NEAR(std::abs(r[i] - s[i] * std::exp(I * (2 * kPi * k * k * m * m))), 0.0, 1e-13);
  }
  std::vector<double> wrong(2, 0.0);
  EXPECT_THROW(recombine_state(split_state(s, params_from_coupling_ratio(1e-14, 1.0, k)), wrong),
               DimensionMismatchError);
}

TEST(RecombineState, AgreesWithJointStateUpToLocalPhase) {
  ExperimentConfig cfg;
  cfg.j = Spin::from_twice(4);
  cfg.k = 0.45;
  const PhaseMatrix ph = phase_matrix(cfg);
  const SpinState a = coherent_spin_state(cfg.j, 1.3, 0.0);
  const SpinState b = coherent_spin_state(cfg.j, 1.9, 0.0);
  const GsgParams p = params_from_coupling_ratio(1e-14, 1.0, cfg.k);
  const int d = cfg.j.dim();

  CMatrix chained(d, d);
  const SpinState rb = recombine_state(split_state(b, p));
  for (int n = 0; n < d; ++n) {
    std::vector<double> column(d);
    for (int m = 0; m < d; ++m) column[m] = ph.phi(m, n);
    const SpinState ra = recombine_state(split_state(a, p), column);
    for (int m = 0; m < d; ++m) chained(m, n) = ra[m] * rb[n];
  }
  const BipartiteState direct = joint_state(a, b, ph, cfg.k);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) {
      const double nn = cfg.j.m(n);
      const cplx local = std::exp(I * (4 * kPi * cfg.k * cfg.k * nn * nn));
      EXPECT_NEAR(std::abs(chained(m, n) - direct.psi(m, n) * local), 0.0, 1e-12);
    }
  const BipartiteState chained_state{cfg.j, chained};
  EXPECT_NEAR(entanglement_entropy(chained_state), entanglement_entropy(direct), 1e-12);
  EXPECT_NEAR(negativity_pure(chained_state), negativity_pure(direct), 1e-12);
}

TEST(FockOracle, Examples) {
  const SpinState half = coherent_spin_state(0.5, kPi / 2, 0.0);
  const auto t0 = fock_oracle_evolve(half, 0.2, 0.0, 32);
  EXPECT_EQ(t0.fidelity, 1.0);

  const auto ts = fock_oracle_evolve(half, 0.2, kPi, 32);
  EXPECT_GE(ts.fidelity, 1.0 - 1e-8);
  EXPECT_NEAR(ts.norm, 1.0, 1e-10);

  const SpinState two = coherent_spin_state(2.0, kPi / 2, 0.0);
  const auto closed = fock_oracle_evolve(two, 0.2, 2 * kPi, 32);
  for (int i = 0; i < 5; ++i) EXPECT_GE(*closed.vacuum_overlap(i), 1.0 - 1e-6);

  EXPECT_THROW(fock_oracle_evolve(two, 3.0, kPi, 20), TruncationError);
}

TEST(FockOracle, EigenPathMatchesTaylorExponential) {
  const SpinState s = coherent_spin_state(1.0, 1.2, 0.0);
  const int n = 24;
  const double k = 0.25, wt = 0.8 * kPi;
  const auto evo = fock_oracle_evolve(s, k, wt, n);
  const int d = 3;
  CMatrix h = CMatrix::Zero(d * n, d * n);
  for (int i = 0; i < d; ++i)
    for (int q = 0; q < n; ++q) {
      h(i * n + q, i * n + q) = q;
      if (q + 1 < n) {
        h(i * n + q + 1, i * n + q) = -k * (i - 1) * std::sqrt(q + 1.0);
        h(i * n + q, i * n + q + 1) = -k * (i - 1) * std::sqrt(q + 1.0);
      }
    }
  CVector init = CVector::Zero(d * n);
  for (int i = 0; i < d; ++i) init[i * n] = s[i];
  const CVector ref = oracle::expm(cplx(0, -wt) * h) * init;
  EXPECT_LT((evo.joint - ref).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FockOracle, ClosedFormEquivalenceSweep) {
  for (int tj : {1, 2, 3, 4})
    for (double k : {0.05, 0.15, 0.3})
      for (double f : {0.5, 1.0, 2.0}) {
        const SpinState s = coherent_spin_state(Spin::from_twice(tj), 1.0, 0.5);
        const auto r = fock_oracle_evolve(s, k, f * kPi, default_fock_truncation(s.spin(), k));
        EXPECT_GE(r.fidelity, 1.0 - 1e-6) << tj << " " << k << " " << f;
        EXPECT_NEAR(r.norm, 1.0, 1e-10);
      }
}

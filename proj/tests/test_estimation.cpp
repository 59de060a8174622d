// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The otafc Authors

#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "otafc/allocation.hpp"
#include "otafc/channel.hpp"
#include "otafc/errors.hpp"
#include "otafc/estimation.hpp"
#include "otafc/rng.hpp"
#include "otafc/topology.hpp"

using namespace otafc;

TEST_SUITE("pilots") {
  TEST_CASE("DFT pilots are orthogonal") {
    const CMat p22 = make_pilots(2, 2);
    CHECK((p22.adjoint() * p22 - 2.0 * CMat::Identity(2, 2)).norm() < 1e-14);
    const CMat p42 = make_pilots(4, 2);
    CHECK((p42.adjoint() * p42 - 4.0 * CMat::Identity(2, 2)).norm() < 1e-13);
    const CMat p49 = make_pilots(49, 49);
    for (Eigen::Index k = 0; k < 49; ++k) CHECK(p49.col(k).squaredNorm() == doctest::Approx(49.0).epsilon(1e-13));
    CHECK((p49.adjoint() * p49 - 49.0 * CMat::Identity(49, 49)).cwiseAbs().maxCoeff() < 1e-11);
    const CMat p240 = make_pilots(240, 120);
    CHECK((p240.adjoint() * p240 - 240.0 * CMat::Identity(120, 120)).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("too few channel uses") {
    CHECK_THROWS_AS(make_pilots(3, 4), InfeasiblePilotError);
    CHECK_THROWS_AS(make_pilots(3, 0), InfeasiblePilotError);
  }

  TEST_CASE("plan validation") {
    auto plan = PilotPlan::minimal(Topology::uniform(4, 2, 3, 100.0), 1.0);
    CHECK(plan.tau == std::vector<int>{4, 3, 3});
    CHECK(plan.total() == 10);
    CHECK_NOTHROW(plan.validate());
    plan.tau[1] = 5;
    CHECK_THROWS_AS(plan.validate(), InfeasiblePilotError);
    plan = PilotPlan::minimal(Topology::uniform(4, 2, 3, 100.0), 0.0);
    CHECK_THROWS_AS(plan.validate(), InfeasiblePilotError);
  }
}

TEST_SUITE("least squares") {
  TEST_CASE("noise-free estimate recovers the channel") {
    oracle::Normal g(1);
    const CMat h = g.matrix(5, 3);
    Rng rng(2);
    const CMat est = estimate_link(h, 0.3, 6, 0.0, rng);
    CHECK((est - h).norm() <= 1e-13 * h.norm());
    CHECK(estimate_link(h, std::numeric_limits<double>::infinity(), 3, 1.0, rng) == h);
  }

  TEST_CASE("scalar link") {
    const CMat h = CMat::Constant(1, 1, {0.3, -0.4});
    Rng r1(9), r2(9);
    const CMat est = estimate_link(h, 2.0, 1, 0.5, r1);
    const auto n = complex_normal_matrix(r2, 1, 1, 0.5)(0, 0);
    CHECK(std::abs(est(0, 0) - (h(0, 0) + n / std::sqrt(2.0))) < 1e-14);
  }

  TEST_CASE("error variance follows sigma^2 / (p tau)") {
    oracle::Normal g(3);
    const CMat h = g.matrix(3, 4, 1e-11);
    const double var = 1.2e-12, pp = 0.5;
    for (int tau : {4, 12}) {
      Rng rng(static_cast<std::uint64_t>(tau));
      double sum = 0.0;
      const int trials = 3000;
      for (int t = 0; t < trials; ++t) sum += (estimate_link(h, pp, tau, var, rng) - h).squaredNorm();
      const double per_entry = sum / (trials * static_cast<double>(h.size()));
      CHECK(per_entry == doctest::Approx(var / (pp * tau)).epsilon(0.05));
    }
  }

  TEST_CASE("training noise comes from the receiving side") {
    NoiseModel n;
    n.relay_var = {1.0, 2.0, 3.0};
    n.rx_var = 4.0;
    CHECK(training_noise_var(n, 0) == 1.0);
    CHECK(training_noise_var(n, 2) == 3.0);
    CHECK(training_noise_var(n, 3) == 4.0);
    CHECK_THROWS_AS(training_noise_var(n, 4), ValidationError);
  }
}

TEST_SUITE("network estimation") {
  const auto topo = Topology::uniform(6, 2, 4, 200.0, true);
  const auto placement = generate_placement(topo, 4);
  const auto truth = draw_channels(topo, placement, {}, 5);
  const auto noise = NoiseModel::thermal(2);

  TEST_CASE("infinite pilot power is exact") {
    const auto plan = PilotPlan::minimal(topo, std::numeric_limits<double>::infinity());
    const auto ls = estimate_all(truth, plan, noise, 1);
    const auto inj = inject_error(truth, plan, noise, 1);
    for (std::size_t i = 0; i < truth.h.size(); ++i) {
      CHECK(ls.h[i] == truth.h[i]);
      CHECK(inj.h[i] == truth.h[i]);
    }
  }

  TEST_CASE("same seed, same estimate; hops use independent streams") {
    const auto plan = allocate(HeuristicId::Uniform, topo, 20);
    const auto a = estimate_all(truth, plan, noise, 77);
    const auto b = estimate_all(truth, plan, noise, 77);
    const auto c = estimate_all(truth, plan, noise, 78);
    for (std::size_t i = 0; i < truth.h.size(); ++i) {
      CHECK(a.h[i] == b.h[i]);
      CHECK(a.h[i] != c.h[i]);
    }
    for (int hop = 0; hop <= 2; ++hop) {
      const auto one = estimate_hop(truth.h[static_cast<std::size_t>(hop) + 1], plan, hop,
                                    training_noise_var(noise, hop),
                                    derive_seed(77, {static_cast<std::uint64_t>(hop)}));
      CHECK(one == a.h[static_cast<std::size_t>(hop) + 1]);
    }
  }

  TEST_CASE("blocked direct link stays zero") {
    const auto t2 = Topology::uniform(6, 2, 4, 200.0, false);
    const auto ch = draw_channels(t2, placement, {}, 5);
    const auto plan = PilotPlan::minimal(t2, 1.0);
    CHECK(estimate_all(ch, plan, noise, 3).direct().isZero(0.0));
    CHECK(inject_error(ch, plan, noise, 3).direct().isZero(0.0));
  }

  TEST_CASE("plan and network must agree") {
    const auto plan = PilotPlan::minimal(Topology::uniform(6, 3, 4, 200.0), 1.0);
    CHECK_THROWS_AS(estimate_all(truth, plan, noise, 1), ValidationError);
    const auto wrong = PilotPlan::minimal(Topology::uniform(6, 2, 5, 200.0), 1.0);
    CHECK_THROWS_AS(inject_error(truth, wrong, noise, 1), ValidationError);
  }

  TEST_CASE("injected error has the LS variance") {
    const auto plan = allocate(HeuristicId::FrontLoaded, topo, 40, {}, 0.2);
    double sum = 0.0;
    long count = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
      const auto est = inject_error(truth, plan, noise, static_cast<std::uint64_t>(t));
      sum += (est.h[2] - truth.h[2]).squaredNorm();
      count += truth.h[2].size();
    }
    CHECK(sum / static_cast<double>(count) ==
          doctest::Approx(noise.relay(2) / (0.2 * plan.tau[1])).epsilon(0.05));
  }
}

TEST_CASE("three-hop per-hop NMSE matches the variance law") {
  const auto topo = Topology::uniform(49, 3, 40, 200.0);
  const auto truth = draw_channels(topo, generate_placement(topo, 8), {}, 9);
  const auto noise = NoiseModel::thermal(3);
  const auto plan = PilotPlan::minimal(topo, 1.0);
  std::vector<double> nmse(4, 0.0);
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const auto est = estimate_all(truth, plan, noise, static_cast<std::uint64_t>(1000 + t));
    for (int hop = 0; hop < 4; ++hop) {
      const auto& h = truth.h[static_cast<std::size_t>(hop) + 1];
      nmse[static_cast<std::size_t>(hop)] +=
          (est.h[static_cast<std::size_t>(hop) + 1] - h).squaredNorm() / h.squaredNorm() / trials;
    }
  }
  for (int hop = 0; hop < 4; ++hop) {
    const auto& h = truth.h[static_cast<std::size_t>(hop) + 1];
    const double mean_power = h.squaredNorm() / static_cast<double>(h.size());
    const double law = training_noise_var(noise, hop) / (plan.tau[static_cast<std::size_t>(hop)] * mean_power);
    CHECK(nmse[static_cast<std::size_t>(hop)] == doctest::Approx(law).epsilon(0.10));
  }
}

TEST_CASE("LS estimates and injected errors are indistinguishable") {
  const auto topo = Topology::uniform(4, 1, 3, 200.0);
  const auto truth = draw_channels(topo, generate_placement(topo, 1), {}, 2);
  const auto noise = NoiseModel::thermal(1);
  const auto plan = allocate(HeuristicId::Uniform, topo, 7, {}, 0.1);
  std::vector<double> ls, inj;
  for (int t = 0; ls.size() < 3000; ++t) {
    const auto a = estimate_all(truth, plan, noise, static_cast<std::uint64_t>(t));
    const auto b = inject_error(truth, plan, noise, static_cast<std::uint64_t>(t) + 500000);
    ls.push_back((a.h[1] - truth.h[1])(1, 2).real());
    inj.push_back((b.h[1] - truth.h[1])(1, 2).real());
  }
  CHECK(oracle::ks_two_sample(ls, inj).p_value > 0.01);
}

TEST_CASE("KS oracle detects a shifted distribution") {
  oracle::Normal g(4);
  std::vector<double> a, b;
  for (int i = 0; i < 2000; ++i) {
    a.push_back(g.complex(2.0).real());
    b.push_back(g.complex(2.0).real() + 0.2);
  }
  CHECK(oracle::ks_two_sample(a, b).p_value < 0.01);
  CHECK(oracle::ks_two_sample(a, a).p_value == doctest::Approx(1.0));
}

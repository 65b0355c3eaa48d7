//
// Copyright 2026 The R-ADMM Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <cmath>
#include <cstring>
#include <memory>
#include <random>

#include "doctest.h"
#include "radmm/error.h"
#include "radmm/solver.h"
#include "test_util.h"

namespace radmm {
namespace {

using ObjectiveList = std::vector<std::shared_ptr<const Objective>>;

Vector Scalar(double v) { return Vector::Constant(1, v); }

NodeState State(Vector primal, Vector dual) {
  NodeState s;
  s.primal = std::move(primal);
  s.dual = std::move(dual);
  return s;
}

ObjectiveList Quadratics(const std::vector<Vector>& centers) {
  ObjectiveList out;
  for (const auto& c : centers) out.push_back(std::make_shared<QuadraticObjective>(c));
  return out;
}

std::vector<Vector> RandomCenters(int n, int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vector> centers;
  for (int i = 0; i < n; ++i) centers.push_back(testing::RandomVector(d, 3.0, rng));
  return centers;
}

Vector Mean(const std::vector<Vector>& vs) {
  Vector m = Vector::Zero(vs[0].size());
  for (const auto& v : vs) m += v;
  return m / static_cast<double>(vs.size());
}

bool BitIdentical(const IterationTrace& a, const IterationTrace& b) {
  if (a.snapshots.size() != b.snapshots.size()) return false;
  for (std::size_t t = 0; t < a.snapshots.size(); ++t) {
    const auto& x = a.snapshots[t];
    const auto& y = b.snapshots[t];
    if (x.phase != y.phase) return false;
    for (std::size_t i = 0; i < x.primal.size(); ++i) {
      if (std::memcmp(x.primal[i].data(), y.primal[i].data(),
                      sizeof(double) * x.primal[i].size()) != 0 ||
          std::memcmp(x.dual[i].data(), y.dual[i].data(),
                      sizeof(double) * x.dual[i].size()) != 0) {
        return false;
      }
    }
  }
  return true;
}

TEST_CASE("schedules") {
  PenaltySchedule c = PenaltySchedule::Constant(0.5);
  CHECK(c.is_constant());
  CHECK(c.Eta(3, 17) == 0.5);
  PenaltySchedule g = PenaltySchedule::Geometric({2.0, 1.0}, {1.5});
  CHECK_FALSE(g.is_constant());
  CHECK(g.Eta(0, 2) == doctest::Approx(4.5));
  CHECK(g.Eta(1, 3) == doctest::Approx(3.375));
  CHECK_NOTHROW(g.Validate(2, 10));
  PenaltySchedule down =
      PenaltySchedule::Custom([](int, int k) { return 1.0 / k; });
  CHECK_THROWS_AS(down.Validate(1, 3), ScheduleViolation);
  CHECK_THROWS_AS(PenaltySchedule::Constant(0.0).Validate(1, 1),
                  ScheduleViolation);
  CHECK(ParseVariant("mr_admm") == Variant::kMrAdmm);
  CHECK(ParseVariant("r_admm") == Variant::kRAdmm);
  CHECK(ParseVariant("conventional") == Variant::kConventional);
  CHECK_THROWS_AS(ParseVariant("admm"), ConfigError);
}

TEST_CASE("config validation") {
  SolverConfig cfg;
  cfg.variant = Variant::kRAdmm;
  cfg.schedule = PenaltySchedule::Geometric({1.0}, {1.04});
  CHECK_THROWS_AS(cfg.Validate(3), ScheduleViolation);
  cfg.variant = Variant::kMrAdmm;
  CHECK_NOTHROW(cfg.Validate(3));
  cfg.outer_pairs = 0;
  CHECK_THROWS(cfg.Validate(3));
  cfg.outer_pairs = 1;
  cfg.inner.tolerance = 0.0;
  CHECK_THROWS(cfg.Validate(3));
}

TEST_CASE("initial states") {
  auto s = InitialStates(4, 3, 0.5, 9);
  auto again = InitialStates(4, 3, 0.5, 9);
  for (int i = 0; i < 4; ++i) {
    CHECK(s[i].dual.isZero(0.0));
    CHECK(s[i].primal.cwiseAbs().maxCoeff() <= 0.5);
    CHECK(s[i].primal == again[i].primal);
    CHECK_FALSE(s[i].cached_gradient.has_value());
  }
  CHECK(s[0].primal != s[1].primal);
}

TEST_CASE("odd update on two nodes") {
  // Node 0 minimizes 1/2 f^2 + |1 - f|^2, so f - 0 + 2(f - 1) = 0.
  const std::vector<Edge> edge{{0, 1}};
  Topology t = Topology::Build(2, edge);
  QuadraticObjective obj(Scalar(0.0));
  std::vector<NodeState> prev{State(Scalar(0.0), Scalar(0.0)),
                              State(Scalar(2.0), Scalar(0.0))};
  NodeState out;
  InnerResult r = OddUpdate(0, prev, t, 1.0, obj, {}, out);
  CHECK(r.converged);
  CHECK(out.primal(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  REQUIRE(out.cached_gradient.has_value());
  CHECK((*out.cached_gradient)(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK_FALSE(out.cached_neighbor_diff.has_value());
}

TEST_CASE("odd update with a single node") {
  Topology t = Topology::Build(1, {});
  Vector a(2);
  a << 0.25, -1.5;
  QuadraticObjective obj(a);
  std::vector<NodeState> prev{State(Vector::Zero(2), Vector::Zero(2))};
  NodeState out;
  OddUpdate(0, prev, t, 1.0, obj, {}, out);
  CHECK((out.primal - a).norm() <= 1e-8);
  CHECK(out.cached_gradient.has_value());
}

TEST_CASE("dual update") {
  const std::vector<Edge> edge{{0, 1}};
  Topology t = Topology::Build(2, edge);
  std::vector<NodeState> s{State(Scalar(1.0), Scalar(0.25)),
                           State(Scalar(0.0), Scalar(-0.25))};
  DualUpdate(0, s, t, 2.0);
  DualUpdate(1, s, t, 2.0);
  CHECK(s[0].dual(0) == 1.25);
  CHECK(s[1].dual(0) == -1.25);
  CHECK((*s[0].cached_neighbor_diff)(0) == 2.0);
  CHECK((*s[1].cached_neighbor_diff)(0) == -2.0);

  std::vector<NodeState> same{State(Scalar(3.0), Scalar(0.5)),
                              State(Scalar(3.0), Scalar(0.7))};
  DualUpdate(0, same, t, 1.0);
  CHECK(same[0].dual(0) == 0.5);
}

TEST_CASE("dual update conserves the dual sum") {
  std::mt19937_64 rng(4);
  Topology t = Topology::RandomConnected(8, 0.4, 4);
  std::vector<NodeState> s;
  for (int i = 0; i < 8; ++i) {
    s.push_back(State(testing::RandomVector(3, 1.0, rng), Vector::Zero(3)));
  }
  for (int i = 0; i < 8; ++i) DualUpdate(i, s, t, 0.7);
  Vector sum = Vector::Zero(3);
  for (const auto& x : s) sum += x.dual;
  CHECK(sum.norm() <= 1e-14);
}

TEST_CASE("even update formula") {
  NodeState s = State(Vector(2), Vector(2));
  s.primal << 1.0, -2.0;
  s.dual << 0.1, 0.2;
  Vector g(2), diff(2);
  g << 0.5, -0.25;
  diff << 1.0, 3.0;
  s.cached_gradient = g;
  s.cached_neighbor_diff = diff;
  // eta = 1, V = 2, gamma = 0: step divisor 4.
  Vector expected(2);
  expected << 1.0 - (0.5 + 0.2 + 1.0) / 4.0, -2.0 - (-0.25 + 0.4 + 3.0) / 4.0;
  CHECK((EvenUpdate(s, 2, 1.0, 0.0) - expected).norm() <= 1e-15);
  CHECK((EvenUpdate(s, 2, 1.0, 1e12) - s.primal).norm() <= 1e-9);

  NodeState missing = State(Vector::Zero(2), Vector::Zero(2));
  CHECK_THROWS_AS(EvenUpdate(missing, 2, 1.0, 0.0), MissingCache);
  missing.cached_gradient = g;
  CHECK_THROWS_AS(EvenUpdate(missing, 2, 1.0, 0.0), MissingCache);
}

TEST_CASE("even update equals a recomputed gradient step") {
  std::mt19937_64 rng(17);
  Topology t = Topology::RandomConnected(5, 0.5, 17);
  std::vector<Vector> centers = RandomCenters(5, 3, 17);
  ObjectiveList objs = Quadratics(centers);
  std::vector<NodeState> prev;
  for (int i = 0; i < 5; ++i) {
    prev.push_back(State(testing::RandomVector(3, 1.0, rng),
                         testing::RandomVector(3, 1.0, rng)));
  }
  std::vector<NodeState> next(5);
  const double eta = 0.8;
  const double gamma = 0.3;
  for (int i = 0; i < 5; ++i) OddUpdate(i, prev, t, eta, *objs[i], {}, next[i]);
  for (int i = 0; i < 5; ++i) DualUpdate(i, next, t, eta);
  for (int i = 0; i < 5; ++i) {
    Vector diff = Vector::Zero(3);
    for (int j : t.neighbors(i)) diff += next[i].primal - next[j].primal;
    const Vector direct =
        next[i].primal -
        (objs[i]->Gradient(next[i].primal) + 2.0 * next[i].dual + eta * diff) /
            (2.0 * eta * t.degree(i) + gamma);
    CHECK((EvenUpdate(next[i], t.degree(i), eta, gamma) - direct).norm() <= 1e-12);
  }
}

TEST_CASE("conventional ADMM on two nodes") {
  const std::vector<Edge> edge{{0, 1}};
  Topology t = Topology::Build(2, edge);
  ObjectiveList objs = Quadratics({Scalar(0.0), Scalar(2.0)});
  SolverConfig cfg;
  cfg.variant = Variant::kConventional;
  cfg.outer_pairs = 100;
  IterationTrace trace = RunSolver(t, objs, cfg);
  CHECK(trace.iterations() == 200);
  for (const auto& f : trace.snapshots.back().primal) {
    CHECK(f(0) == doctest::Approx(1.0).epsilon(1e-8));
  }
  for (std::size_t k = 1; k < trace.snapshots.size(); ++k) {
    CHECK(trace.snapshots[k].phase == Phase::kConventional);
  }
}

TEST_CASE("conventional ADMM symmetry and relabeling") {
  Topology ring = testing::Cycle(4);
  Vector a(2);
  a << 0.3, -0.6;
  std::vector<NodeState> init(4, State(Vector::Ones(2), Vector::Zero(2)));
  SolverConfig cfg;
  cfg.variant = Variant::kConventional;
  cfg.outer_pairs = 5;
  IterationTrace same = RunSolverFrom(ring, Quadratics({a, a, a, a}), cfg, init);
  for (const auto& snap : same.snapshots) {
    for (int i = 1; i < 4; ++i) CHECK(snap.primal[i] == snap.primal[0]);
  }

  // Swap labels 0 <-> 2 on the path 0-1-2-3 -> 2-1-0-3.
  std::vector<Vector> centers = RandomCenters(4, 2, 3);
  const std::vector<int> perm{2, 1, 0, 3};
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}};
  std::vector<Edge> permuted;
  for (auto [u, v] : edges) permuted.emplace_back(perm[u], perm[v]);
  Topology t = Topology::Build(4, edges);
  Topology tp = Topology::Build(4, permuted);
  std::vector<Vector> centers_p(4);
  std::vector<NodeState> init_a, init_p(4);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 4; ++i) {
    init_a.push_back(State(testing::RandomVector(2, 1.0, rng), Vector::Zero(2)));
  }
  for (int i = 0; i < 4; ++i) {
    centers_p[perm[i]] = centers[i];
    init_p[perm[i]] = init_a[i];
  }
  IterationTrace ta = RunSolverFrom(t, Quadratics(centers), cfg, init_a);
  IterationTrace tb = RunSolverFrom(tp, Quadratics(centers_p), cfg, init_p);
  for (std::size_t k = 0; k < ta.snapshots.size(); ++k) {
    for (int i = 0; i < 4; ++i) {
      CHECK((ta.snapshots[k].primal[i] - tb.snapshots[k].primal[perm[i]]).norm() <=
            1e-12);
    }
  }
}

TEST_CASE("trace length") {
  Topology t = testing::Path(3);
  SolverConfig cfg;
  cfg.outer_pairs = 1;
  IterationTrace trace = RunSolver(t, Quadratics(RandomCenters(3, 2, 1)), cfg);
  REQUIRE(trace.iterations() == 2);
  CHECK(trace.snapshots[0].phase == Phase::kInitial);
  CHECK(trace.snapshots[1].phase == Phase::kOdd);
  CHECK(trace.snapshots[2].phase == Phase::kEven);
  CHECK(trace.snapshots[2].t == 2);
}

TEST_CASE("R-ADMM reaches the consensus mean") {
  Topology t = Topology::RandomConnected(5, 0.5, 7);
  std::vector<Vector> centers = RandomCenters(5, 4, 7);
  SolverConfig cfg;
  cfg.variant = Variant::kRAdmm;
  cfg.schedule = PenaltySchedule::Constant(0.5);
  cfg.gamma = 1.0;
  cfg.outer_pairs = 100;
  IterationTrace trace = RunSolver(t, Quadratics(centers), cfg);
  const Vector target = Mean(centers);
  const auto& last_odd = trace.snapshots[2 * cfg.outer_pairs - 1];
  for (const auto& f : last_odd.primal) CHECK((f - target).norm() <= 1e-4);
}

TEST_CASE("odd subsequence behaviour on the quadratic problem") {
  Topology t = Topology::RandomConnected(6, 0.4, 21);
  std::vector<Vector> centers = RandomCenters(6, 3, 21);
  ObjectiveList objs = Quadratics(centers);
  SolverConfig cfg;
  cfg.variant = Variant::kRAdmm;
  cfg.schedule = PenaltySchedule::Constant(0.5);
  cfg.gamma = 1.0;
  cfg.outer_pairs = 200;
  IterationTrace trace = RunSolver(t, objs, cfg);
  const Vector target = Mean(centers);
  std::vector<Vector> optimum(6, target);
  const double best = AverageObjective(optimum, objs);
  double prev_err = std::numeric_limits<double>::infinity();
  for (int k = 11; k <= cfg.outer_pairs; ++k) {
    const auto& snap = trace.snapshots[2 * k - 1];
    double err = 0.0;
    for (const auto& f : snap.primal) err = std::max(err, (f - target).norm());
    CHECK(err <= prev_err * (1 + 1e-9) + 1e-12);
    prev_err = err;
  }
  const auto& last = trace.snapshots[2 * cfg.outer_pairs - 1];
  CHECK(std::abs(AverageObjective(last.primal, objs) - best) <= 1e-6);

  for (const auto& snap : trace.snapshots) {
    Vector sum = Vector::Zero(3);
    for (const auto& l : snap.dual) sum += l;
    CHECK(sum.norm() <= 1e-10);
  }
}

TEST_CASE("even iterations never touch the objective") {
  Topology t = Topology::RandomConnected(5, 0.5, 2);
  std::vector<std::shared_ptr<CountingObjective>> counters;
  ObjectiveList objs;
  for (const auto& c : RandomCenters(5, 3, 2)) {
    counters.push_back(std::make_shared<CountingObjective>(
        std::make_shared<QuadraticObjective>(c)));
    objs.push_back(counters.back());
  }
  for (Variant v : {Variant::kRAdmm, Variant::kMrAdmm}) {
    SolverConfig cfg;
    cfg.variant = v;
    cfg.schedule = v == Variant::kRAdmm
                       ? PenaltySchedule::Constant(1.0)
                       : PenaltySchedule::Geometric({1.0}, {1.05});
    cfg.gamma = 0.5;
    cfg.outer_pairs = 6;
    std::vector<long> odd_calls, even_calls;
    long before = 0;
    auto total = [&] {
      long s = 0;
      for (const auto& c : counters) s += c->total_calls();
      return s;
    };
    RunHooks hooks;
    Phase current = Phase::kInitial;
    auto close = [&] {
      if (current == Phase::kOdd) odd_calls.push_back(total() - before);
      if (current == Phase::kEven) even_calls.push_back(total() - before);
    };
    hooks.on_phase = [&](int, Phase p) {
      close();
      current = p;
      before = total();
    };
    RunSolver(t, objs, cfg, hooks);
    close();
    REQUIRE(odd_calls.size() == 6);
    REQUIRE(even_calls.size() == 6);
    for (long c : odd_calls) CHECK(c >= 5);
    for (long c : even_calls) CHECK(c == 0);
  }
}

TEST_CASE("constant MR-ADMM reproduces R-ADMM exactly") {
  Topology t = Topology::RandomConnected(6, 0.5, 12);
  ObjectiveList objs = Quadratics(RandomCenters(6, 3, 12));
  SolverConfig r;
  r.variant = Variant::kRAdmm;
  r.schedule = PenaltySchedule::Constant(0.9);
  r.gamma = 0.5;
  r.outer_pairs = 30;
  r.seed = 77;
  SolverConfig mr = r;
  mr.variant = Variant::kMrAdmm;
  CHECK(BitIdentical(RunSolver(t, objs, r), RunSolver(t, objs, mr)));
  // Geometric with ratio 1 is a non-constant code path with the same values.
  mr.schedule = PenaltySchedule::Geometric({0.9}, {1.0});
  CHECK(BitIdentical(RunSolver(t, objs, r), RunSolver(t, objs, mr)));
}

TEST_CASE("traces do not depend on the worker count") {
  Topology t = Topology::RandomConnected(7, 0.4, 3);
  ObjectiveList objs = Quadratics(RandomCenters(7, 4, 3));
  for (Variant v : {Variant::kConventional, Variant::kRAdmm, Variant::kMrAdmm}) {
    SolverConfig cfg;
    cfg.variant = v;
    cfg.schedule = v == Variant::kMrAdmm
                       ? PenaltySchedule::Geometric({1.0}, {1.02})
                       : PenaltySchedule::Constant(1.0);
    cfg.outer_pairs = 15;
    cfg.seed = 5;
    IterationTrace one = RunSolver(t, objs, cfg);
    cfg.workers = 4;
    CHECK(BitIdentical(one, RunSolver(t, objs, cfg)));
  }
}

TEST_CASE("decreasing schedules are rejected") {
  Topology t = testing::Path(2);
  SolverConfig cfg;
  cfg.variant = Variant::kMrAdmm;
  cfg.schedule = PenaltySchedule::Custom([](int, int k) { return 5.0 - k; });
  cfg.outer_pairs = 3;
  CHECK_THROWS_AS(RunSolver(t, Quadratics(RandomCenters(2, 1, 1)), cfg),
                  ScheduleViolation);
}

}  // namespace
}  // namespace radmm

#include <doctest.h>

#include <set>

#include "qafactor/multiplier.hpp"

using namespace qaf;

namespace {

std::size_t count_role(const MultiplierNetwork& net, RoleKind kind) {
  std::size_t c = 0;
  for (const Role& r : net.roles) c += r.kind == kind;
  return c;
}

}  // namespace

TEST_CASE("network layout and roles") {
  const MultiplierNetwork net = build_multiplier(3, 2);
  CHECK(net.cells.size() == 6);
  CHECK(net.model.size() == 36);
  CHECK(net.product_bits() == 5);
  CHECK(count_role(net, RoleKind::FactorA) == 3);
  CHECK(count_role(net, RoleKind::FactorB) == 2);
  CHECK(count_role(net, RoleKind::Product) == 5);
  for (std::size_t k = 0; k < 3; ++k) CHECK(net.roles[net.factor_a_spin(k)] == Role{RoleKind::FactorA, k});
  for (std::size_t k = 0; k < 5; ++k) CHECK(net.roles[net.product_spin(k)] == Role{RoleKind::Product, k});
  CHECK(net.factor_a_spin(1) == net.cell(1, 0).a);
  CHECK(net.factor_b_spin(1) == net.cell(0, 1).b);
  CHECK(net.product_spin(0) == net.cell(0, 0).sum);
  CHECK(net.product_spin(1) == net.cell(0, 1).sum);
  CHECK(net.product_spin(2) == net.cell(1, 1).sum);
  CHECK(net.product_spin(3) == net.cell(2, 1).sum);
  CHECK(net.product_spin(4) == net.cell(2, 1).carry);
  // c on row 0 and d on column 0 have no driver.
  CHECK(net.boundary_zero.size() == 3 + 2);
  CHECK(net.boundary_zero.at(net.cell(1, 0).c) == 0);
  CHECK(net.boundary_zero.at(net.cell(0, 1).d) == 0);
  CHECK_THROWS_AS(build_multiplier(0, 2), Error);
  CHECK_THROWS_AS(build_multiplier(40, 30), Error);
}

TEST_CASE("expected ground energy counts cells and couplers") {
  const MultiplierNetwork net = build_multiplier(2, 2);
  CHECK(net.cell_e0 == -3.75);
  CHECK(net.coupler_count == net.wires.size());
  CHECK(net.expected_e0 == doctest::Approx(4 * -3.75 - static_cast<double>(net.coupler_count)));
  CHECK(expected_ground_energy(net) == net.expected_e0);

  NetworkOptions chained;
  chained.interconnect_chains = true;
  chained.chain_strength = 2.0;
  const MultiplierNetwork c = build_multiplier(2, 2, chained);
  CHECK(c.chain_qubits == c.wires.size());
  CHECK(c.coupler_count == 2 * c.wires.size());
  CHECK(c.model.size() == net.model.size() + c.chain_qubits);
  CHECK(c.expected_e0 == doctest::Approx(4 * -3.75 - 2.0 * static_cast<double>(c.coupler_count)));
}

TEST_CASE("forward mode: every clamped 2x2 pair has a unique correct ground state") {
  const MultiplierNetwork net = build_multiplier(2, 2);
  for (std::uint64_t m = 0; m < 4; ++m) {
    for (std::uint64_t n = 0; n < 4; ++n) {
      const ClampedProblem p = clamp_factors(net, m, n);
      const GroundReport g = brute_force_ground(p.model);
      CHECK(g.e0 + p.fold.offset == doctest::Approx(net.expected_e0));
      CHECK(g.e0 == doctest::Approx(p.reference_e0));
      REQUIRE(g.ground_count == 1);
      const FactorOutcome o = decode(net, p.expand(g.ground[0]));
      CHECK(o.m == m);
      CHECK(o.n == n);
      CHECK(o.p == m * n);
      CHECK(o.is_ground);
    }
  }
}

TEST_CASE("free 2x2 network has one ground state per input pair") {
  const MultiplierNetwork net = build_multiplier(2, 2);
  const ClampedProblem p = free_problem(net);
  const GroundReport g = brute_force_ground(p.model);
  CHECK(g.e0 + p.fold.offset == doctest::Approx(-23.0));
  REQUIRE(g.ground_count == 16);
  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (const auto& s : g.ground) {
    const FactorOutcome o = decode(net, p.expand(s));
    CHECK(o.p == o.m * o.n);
    pairs.insert({o.m, o.n});
  }
  CHECK(pairs.size() == 16);
}

TEST_CASE("chained 2x2 ground energy") {
  NetworkOptions o;
  o.interconnect_chains = true;
  const MultiplierNetwork net = build_multiplier(2, 2, o);
  const ClampedProblem p = clamp_factors(net, 3, 2);
  const GroundReport g = brute_force_ground(p.model);
  CHECK(g.e0 + p.fold.offset == doctest::Approx(-31.0));
  REQUIRE(g.ground_count == 1);
  CHECK(decode(net, p.expand(g.ground[0])).p == 6);
}

TEST_CASE("inverse mode ground states are exactly the factorizations") {
  const MultiplierNetwork net = build_multiplier(2, 2);
  for (std::uint64_t P : {0, 1, 2, 3, 4, 6, 9}) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> expect;
    for (std::uint64_t m = 0; m < 4; ++m)
      for (std::uint64_t n = 0; n < 4; ++n)
        if (m * n == P) expect.insert({m, n});
    for (ProductClamp method : {ProductClamp::Fold, ProductClamp::Bias}) {
      const ClampedProblem p = clamp_product(net, P, method);
      const GroundReport g = brute_force_ground(p.model);
      CHECK(g.e0 == doctest::Approx(p.reference_e0));
      std::set<std::pair<std::uint64_t, std::uint64_t>> got;
      for (const auto& s : g.ground) {
        const FactorOutcome o = decode(net, p.expand(s));
        CHECK(o.p == P);
        CHECK(o.is_ground);
        got.insert({o.m, o.n});
      }
      CHECK(got == expect);
    }
  }
}

TEST_CASE("range errors") {
  const MultiplierNetwork net = build_multiplier(2, 3);
  CHECK_THROWS_AS(clamp_factors(net, 4, 1), Error);
  CHECK_THROWS_AS(clamp_factors(net, 1, 8), Error);
  CHECK_THROWS_AS(clamp_product(net, 32), Error);
  CHECK_NOTHROW(clamp_product(net, 31));
  CHECK_THROWS_AS(decode(net, SpinState(3)), Error);
}

TEST_CASE("role-based decoding matches the network decoder") {
  const MultiplierNetwork net = build_multiplier(2, 2);
  const ClampedProblem p = clamp_product(net, 6);
  const auto roles = reindex_roles(net.role_entries(), p.fold);
  for (const RoleEntry& r : roles) CHECK(r.kind != 'P');
  CHECK(roles.size() == 4);
  const GroundReport g = brute_force_ground(p.model);
  for (const auto& s : g.ground) {
    const FactorOutcome a = decode(net, p.expand(s));
    const FactorOutcome b = decode_roles(roles, s);
    CHECK(a.m == b.m);
    CHECK(a.n == b.n);
  }
  const FactorOutcome full = decode_roles(net.role_entries(), p.expand(g.ground.at(0)));
  CHECK(full.p == 6);
}

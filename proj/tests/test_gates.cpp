#include <doctest.h>

#include <cmath>
#include <set>

#include "qafactor/gates.hpp"

using namespace qaf;

namespace {

// Valid (bits) rows by direct evaluation of the Boolean relation.
std::vector<std::uint32_t> rows_where(std::size_t n, bool (*pred)(std::uint32_t)) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1U << n); ++m)
    if (pred(m)) out.push_back(m);
  return out;
}

bool bit(std::uint32_t m, int k) { return (m >> k) & 1U; }

std::vector<std::uint32_t> ground_masks(const IsingModel& m) {
  std::vector<std::uint32_t> out;
  for (const auto& s : brute_force_ground(m).ground) out.push_back(static_cast<std::uint32_t>(s.mask()));
  return out;
}

}  // namespace

TEST_CASE("truth tables") {
  CHECK(nor_table().rows() == rows_where(3, [](std::uint32_t m) { return bit(m, 2) == !(bit(m, 0) || bit(m, 1)); }));
  CHECK(and_table().rows() == rows_where(3, [](std::uint32_t m) { return bit(m, 2) == (bit(m, 0) && bit(m, 1)); }));
  const auto unit = multiplier_unit_table();
  CHECK(unit.rows().size() == 16);
  for (std::uint32_t m : unit.rows()) {
    const int lhs = 2 * bit(m, 4) + bit(m, 5);
    const int rhs = (bit(m, 0) && bit(m, 1)) + bit(m, 2) + bit(m, 3);
    CHECK(lhs == rhs);
  }
  CHECK_THROWS_AS(TruthTable(2, {0, 7}), Error);
  CHECK_THROWS_AS(TruthTable(2, {1, 1}), Error);
  CHECK_THROWS_AS(TruthTable(2, {}), Error);
}

TEST_CASE("NOR block coefficients and ground manifold") {
  const GateTemplate g = nor_gate();
  CHECK(g.model.bias(0) == 0.5);
  CHECK(g.model.bias(1) == 0.5);
  CHECK(g.model.bias(2) == 1.0);
  CHECK(g.model.coupling(0, 1) == 0.5);
  CHECK(g.model.coupling(0, 2) == 1.0);
  CHECK(g.model.coupling(1, 2) == 1.0);
  const GroundReport r = brute_force_ground(g.model);
  CHECK(r.e0 == -1.5);
  CHECK(r.gap == 2.0);
  CHECK(ground_masks(g.model) == nor_table().rows());
  CHECK(verify_gate(g).pass);
}

TEST_CASE("AND block is NOR with flipped signs") {
  const GateTemplate g = and_gate();
  const GateTemplate n = nor_gate();
  CHECK(g.model.bias(0) == -n.model.bias(0));
  CHECK(g.model.bias(1) == -n.model.bias(1));
  CHECK(g.model.bias(2) == n.model.bias(2));
  CHECK(g.model.coupling(0, 1) == n.model.coupling(0, 1));
  CHECK(g.model.coupling(0, 2) == -n.model.coupling(0, 2));
  CHECK(g.model.coupling(1, 2) == -n.model.coupling(1, 2));
  CHECK(ground_masks(g.model) == and_table().rows());
  CHECK(brute_force_ground(g.model).gap == 2.0);
}

TEST_CASE("half adder by exhaustive enumeration") {
  const ComposedCircuit ha = half_adder();
  REQUIRE(ha.model.size() == 9);
  // NOT couplings on the AND block's inputs, WIRE couplings into the XOR block.
  CHECK(ha.model.coupling(0, 3) == 1.0);
  CHECK(ha.model.coupling(1, 4) == 1.0);
  CHECK(ha.model.coupling(5, 6) == -1.0);
  CHECK(ha.model.coupling(2, 7) == -1.0);
  const GroundReport r = brute_force_ground(ha.model);
  CHECK(r.e0 == -8.5);
  REQUIRE(r.ground_count == 4);
  std::set<std::pair<int, int>> inputs;
  for (const auto& s : r.ground) {
    const int a = s[ha.ports.at("a")] > 0, b = s[ha.ports.at("b")] > 0;
    const int carry = s[ha.ports.at("carry")] > 0, sum = s[ha.ports.at("sum")] > 0;
    CHECK(sum == (a ^ b));
    CHECK(carry == (a & b));
    inputs.insert({a, b});
  }
  CHECK(inputs.size() == 4);
}

TEST_CASE("composition errors") {
  CircuitGraph g;
  g.gates = {nor_gate(), nor_gate()};
  g.couplings = {{{0, "out"}, {2, "in_a"}}};
  CHECK_THROWS_AS(compose(g), Error);
  g.couplings = {{{0, "out"}, {1, "nope"}}};
  CHECK_THROWS_AS(compose(g), Error);
  g.couplings = {{{0, "out"}, {0, "in_a"}}};
  CHECK_THROWS_AS(compose(g), Error);
  g.couplings = {{{0, "out"}, {1, "in_a"}}, {{1, "in_a"}, {0, "out"}, CouplingKind::Not}};
  CHECK_THROWS_AS(compose(g), Error);
  try {
    compose(g);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Composition);
  }
  g.couplings = {{{0, "out"}, {1, "in_a"}, CouplingKind::Wire, 2.0}};
  const ComposedCircuit c = compose(g);
  CHECK(c.model.coupling(2, 3) == -2.0);
}

TEST_CASE("multiplier unit synthesis") {
  const GateTemplate& u = multiplier_unit();
  REQUIRE(u.model.size() == 6);
  const GateReport r = verify_gate(u);
  CHECK(r.pass);
  CHECK(r.achieved_gap >= 1.0 - 1e-9);
  const GroundReport g = brute_force_ground(u.model);
  CHECK(g.ground_count == 16);
  CHECK(ground_masks(u.model) == multiplier_unit_table().rows());
  for (double h : u.model.biases()) CHECK(std::abs(h) <= 2.0);
  for (const auto& [k, v] : u.model.couplings()) CHECK(std::abs(v) <= 2.0);
  for (const char* p : {"a", "b", "c", "d", "carry", "sum"}) CHECK(u.ports.contains(p));
}

TEST_CASE("synthesis recovers small gates") {
  SynthesisOptions o;
  o.gap = 2.0;
  const GateTemplate nor = synthesize_penalty(nor_table(), o);
  CHECK(verify_gate(nor).pass);
  CHECK(ground_masks(nor.model) == nor_table().rows());
  const GateTemplate land = synthesize_penalty(and_table(), o);
  CHECK(verify_gate(land).pass);
  CHECK(land.ports.at("v2") == 2);
}

TEST_CASE("synthesis reports infeasible requests") {
  // Three-variable XOR has no penalty model without an auxiliary spin.
  const TruthTable x3 = TruthTable::from_predicate(3, [](std::uint32_t m) { return bit(m, 2) == (bit(m, 0) ^ bit(m, 1)); });
  try {
    synthesize_penalty(x3, {});
    FAIL("expected a synthesis error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Synthesis);
    CHECK(std::string(e.what()).find("constraints violated") != std::string::npos);
  }
  // The NOR table cannot reach gap 2 without the output couplings.
  SynthesisOptions sparse;
  sparse.pairs = {{0, 1}};
  sparse.gap = 2.0;
  CHECK_THROWS_AS(synthesize_penalty(nor_table(), sparse), Error);
  SynthesisOptions too_big;
  too_big.gap = 5.0;
  too_big.bound = 2.0;
  CHECK_THROWS_AS(synthesize_penalty(nor_table(), too_big), Error);
  SynthesisOptions bad_pair;
  bad_pair.pairs = {{0, 9}};
  CHECK_THROWS_AS(synthesize_penalty(nor_table(), bad_pair), Error);
}

TEST_CASE("verify_gate flags a corrupted model") {
  GateTemplate g = nor_gate();
  g.model = IsingModel(3, {0.5, 0.5, -1.0}, g.model.couplings());
  const GateReport r = verify_gate(g);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.offending.empty());

  GateTemplate claims_more = nor_gate();
  claims_more.gap = 3.0;
  const GateReport r2 = verify_gate(claims_more);
  CHECK_FALSE(r2.pass);
  CHECK(r2.achieved_gap == 2.0);
}

TEST_CASE("ground rows project onto chosen spins") {
  const ComposedCircuit ha = half_adder();
  const auto rows = ground_rows(ha.model, {ha.ports.at("a"), ha.ports.at("b"), ha.ports.at("carry"), ha.ports.at("sum")});
  // (a, b, carry, sum) as bits 0..3.
  CHECK(rows == std::vector<std::uint32_t>{0b0000, 0b0111, 0b1001, 0b1010});
}

#include <sstream>

#include "doctest.h"
#include "random_models.hpp"
#include "sdkey/channel.hpp"
#include "sdkey/error.hpp"
#include "sdkey/spec_io.hpp"

using namespace sdkey;
using doctest::Approx;

namespace {

// P(Y != X1 ^ X2) on a binary channel, summed over the state.
double output_flip_rate(const SdMacSpec& spec) {
  const JointPmf j = channel_joint(spec, uniform_input_law(spec));
  const JointPmf m = j.marginal({var::X1, var::X2, var::Y});
  double p = 0.0;
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2)
      for (std::size_t y = 0; y < 2; ++y)
        if (y != (x1 ^ x2)) p += m.table()[(x1 * 2 + x2) * 2 + y];
  return p;
}

const char* kTwoState = R"(format = 1
[alphabets]
S = a b
T = -
X1 = 0 1
X2 = -
Y = 0 1
Z = -
[state_pmf]
0.25 0.75
[degrade_kernel]
a : 1
b : 1
[channel_kernel]
0 - a : 1 0
0 - b : 0.5 0.5
1 - a : 0 1
1 - b : 0.2 0.8
)";

}  // namespace

TEST_CASE("stuck-at memory") {
  SUBCASE("p = 1 makes Y independent of X") {
    const SdMacSpec spec = build_stuck_at(1.0);
    const JointPmf j = channel_joint(spec, uniform_input_law(spec));
    CHECK(mutual_information(j, {var::X1}, {var::Y}) == Approx(0.0).epsilon(1e-15));
    CHECK(entropy(j, {var::Y}) == Approx(1.0));
  }
  SUBCASE("p = 0 is a noiseless bit") {
    const SdMacSpec spec = build_stuck_at(0.0);
    const JointPmf j = channel_joint(spec, uniform_input_law(spec));
    CHECK(mutual_information(j, {var::X1}, {var::Y}) == Approx(1.0));
  }
  SUBCASE("p = 0.3 carries 0.7 bits per clean use") {
    const SdMacSpec spec = build_stuck_at(0.3);
    CHECK(spec.state_pmf().table() == std::vector<double>{0.15, 0.15, 0.7});
    const JointPmf j = channel_joint(spec, uniform_input_law(spec));
    CHECK(conditional_mutual_information(j, {var::X1}, {var::Y}, {var::S}) == Approx(0.7).epsilon(1e-12));
    CHECK(spec.z().alphabet.size() == 1);
  }
  SUBCASE("eve reading memory sees Y") {
    const SdMacSpec spec = build_stuck_at(0.3, EveMode::reads_memory);
    const JointPmf j = channel_joint(spec, uniform_input_law(spec));
    CHECK(conditional_entropy(j, {var::Z}, {var::Y}) == Approx(0.0).epsilon(1e-15));
  }
  CHECK_THROWS_AS(build_stuck_at(1.2), ValidationError);
}

TEST_CASE("modulo-additive channel") {
  const SdMacSpec noiseless = build_modulo_additive(0, 0, 0);
  const JointPmf j0 = channel_joint(noiseless, uniform_input_law(noiseless));
  CHECK(conditional_entropy(j0, {var::Y, var::Z}, {var::X1, var::X2}) == Approx(0.0).epsilon(1e-15));
  CHECK(conditional_entropy(j0, {var::Z}, {var::Y}) == Approx(0.0).epsilon(1e-15));

  const SdMacSpec twin = build_modulo_additive(0.2, 0.2, 0.2);
  const JointPmf jt = channel_joint(twin, uniform_input_law(twin));
  CHECK(conditional_mutual_information(jt, {var::Y}, {var::Z}, {var::X1, var::X2, var::S}) ==
        Approx(0.0).epsilon(1e-14));
  CHECK(entropy(jt, {var::X1, var::X2, var::Y}) == Approx(entropy(jt, {var::X1, var::X2, var::Z})));

  CHECK(output_flip_rate(build_modulo_additive(0.2, 0.1, 0.3)) == Approx(0.26).epsilon(1e-12));

  std::vector<std::string> warnings;
  build_modulo_additive(0, 0.3, 0.1, NoiseCoupling::independent, &warnings);
  CHECK_FALSE(warnings.empty());
  CHECK_THROWS_AS(build_modulo_additive(0, -0.1, 0.2), ValidationError);
}

TEST_CASE("cascade coupling is degraded with the same marginals") {
  const SdMacSpec ind = build_modulo_additive(0.2, 0.1, 0.3);
  const SdMacSpec cas = build_modulo_additive(0.2, 0.1, 0.3, NoiseCoupling::degraded_cascade);
  const JointPmf a = channel_joint(ind, uniform_input_law(ind));
  const JointPmf b = channel_joint(cas, uniform_input_law(cas));
  const VarList xz{var::X1, var::X2, var::S, var::Z};
  for (std::size_t i = 0; i < a.marginal(xz).size(); ++i) {
    CHECK(a.marginal(xz).table()[i] == Approx(b.marginal(xz).table()[i]).epsilon(1e-14));
  }
  CHECK(is_markov_chain(b, {var::X1, var::X2, var::S}, {var::Y}, {var::Z}));
  CHECK_FALSE(is_markov_chain(a, {var::X1, var::X2, var::S}, {var::Y}, {var::Z}));
}

TEST_CASE("spec file round trip and validation") {
  const SdMacSpec spec = build_modulo_additive(0.2, 0.1, 0.3);
  std::stringstream ss;
  write_spec(ss, spec);
  CHECK(read_spec(ss) == spec);

  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const SdMacSpec r = testing::random_binary_spec(rng, i % 2 == 1);
    std::stringstream rs;
    write_spec(rs, r);
    CHECK(read_spec(rs) == r);
  }

  std::string bad = kTwoState;
  bad.replace(bad.find("0.5 0.5"), 7, "0.5 0.4");
  std::istringstream is(bad);
  try {
    read_spec(is, "bad.txt");
    FAIL("expected a normalization error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.txt") != std::string::npos);
    CHECK(msg.find("X1=0,X2=-,S=b") != std::string::npos);
  }
}

TEST_CASE("hand-written two-state spec") {
  std::istringstream is(kTwoState);
  const SdMacSpec spec = read_spec(is);
  const JointPmf j = channel_joint(spec, uniform_input_law(spec));
  const JointPmf y = j.marginal({var::Y});
  // 0.5 * (0.25 * 0 + 0.75 * 0.5) + 0.5 * (0.25 * 1 + 0.75 * 0.8)
  CHECK(y.table()[1] == Approx(0.6125).epsilon(1e-14));
}

TEST_CASE("round-one joint") {
  const SdMacSpec spec = build_modulo_additive(0.2, 0.1, 0.3);
  SUBCASE("degenerate auxiliaries") {
    const JointPmf full = full_joint_round1(spec, trivial_scheme(spec));
    CHECK(entropy(full, {var::U, var::V}) == 0.0);
    CHECK(entropy(full, {var::X1, var::X2}) == 0.0);
  }
  SUBCASE("X1 = X2 = V gives Y ~ Bern((alpha * p_s) * p1)") {
    const double alpha = 0.3;
    const JointPmf full = full_joint_round1(spec, copy_input_scheme(spec, alpha));
    // X1 ^ X2 = 0 under the copy, so only the state and noise flip Y.
    CHECK(full.marginal({var::Y}).table()[1] == Approx(binary_convolution(0.2, 0.1)).epsilon(1e-14));
    const JointPmf single = full_joint_round1(spec, single_input_scheme(spec, alpha));
    CHECK(single.marginal({var::Y}).table()[1] ==
          Approx(binary_convolution(binary_convolution(alpha, 0.2), 0.1)).epsilon(1e-14));
  }
  SUBCASE("identity degrade kernel") {
    const Alphabet b = Alphabet::range("bit", 2);
    const SdMacSpec st(b, b, b, b, b, b, {0.3, 0.7}, {1, 0, 0, 1}, spec.channel_kernel().rows());
    const JointPmf full = full_joint_round1(st, trivial_scheme(st));
    CHECK(mutual_information(full, {var::S}, {var::T}) == Approx(entropy(full, {var::S})));
  }
  SUBCASE("reduced joint is the marginal of the full joint") {
    Rng rng(11);
    const SdMacSpec r = testing::random_binary_spec(rng);
    const AuxiliaryScheme aux = testing::random_aux(rng, r, 2, 3);
    const JointPmf full = full_joint_round1(r, aux);
    const JointPmf red = reduced_joint_round1(r, aux);
    const JointPmf m = full.marginal({var::S, var::T, var::U, var::V, var::Y, var::Z});
    for (std::size_t i = 0; i < m.size(); ++i) CHECK(m.table()[i] == Approx(red.table()[i]).epsilon(1e-14));
  }
}

TEST_CASE("round-two joint") {
  const SdMacSpec spec = build_modulo_additive(0.2, 0.1, 0.3);
  SUBCASE("test channels ignoring (Y, T)") {
    const ConditionalPmf flat({spec.y(), spec.t()}, {{var::T1, Alphabet::range("T1", 2)}},
                              {0.4, 0.6, 0.4, 0.6});
    const ConditionalPmf flat2({spec.y(), spec.t()}, {{var::T2, Alphabet::range("T2", 2)}},
                               {0.4, 0.6, 0.4, 0.6});
    const JointPmf j = full_joint_round2(spec, Round2Scheme(uniform_input_law(spec), flat, flat2));
    CHECK(conditional_mutual_information(j, {var::T1}, {var::Y}, {var::T}) == Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("T1 = Y") {
    const JointPmf j = full_joint_round2(spec, binary_test_channel_scheme(spec, 0.0, 0.2));
    CHECK(mutual_information(j, {var::T1}, {var::Y}) == Approx(entropy(j, {var::Y})));
  }
  SUBCASE("T1 and T2 are conditionally independent given (Y, T)") {
    Rng rng(17);
    for (int i = 0; i < 20; ++i) {
      const SdMacSpec r = testing::random_binary_spec(rng);
      const JointPmf j = full_joint_round2(r, testing::random_round2_scheme(rng, r));
      CHECK(conditional_mutual_information(j, {var::T1}, {var::T2}, {var::Y, var::T}) <= 1e-10);
    }
  }
}

TEST_CASE("parallel BSC and constant eavesdropper") {
  const SdMacSpec spec = build_parallel_bsc(0.0, 0.01, 0.01, 0.1);
  CHECK(spec.y().alphabet.size() == 4);
  const SdMacSpec quiet = with_constant_eavesdropper(spec);
  CHECK(quiet.z().alphabet.size() == 1);
  const JointPmf j = channel_joint(quiet, uniform_input_law(quiet));
  CHECK(entropy(j, {var::Z}) == Approx(0.0).epsilon(1e-15));
  CHECK(channel_joint(spec, uniform_input_law(spec)).marginal({var::X1, var::X2, var::Y}).size() == 16);
}

TEST_CASE("scheme files round trip") {
  Rng rng(23);
  const SdMacSpec spec = testing::random_binary_spec(rng);
  const AuxiliaryScheme aux = testing::random_aux(rng, spec, 2, 3);
  std::stringstream a;
  write_aux_scheme(a, aux);
  const AuxiliaryScheme back = read_aux_scheme(a, spec);
  CHECK(back.v_kernel().rows() == aux.v_kernel().rows());
  CHECK(back.x2_kernel().rows() == aux.x2_kernel().rows());

  const Round2Scheme sch = testing::random_round2_scheme(rng, spec);
  std::stringstream b;
  write_round2_scheme(b, sch);
  const Round2Scheme back2 = read_round2_scheme(b, spec);
  CHECK(back2.input_law().rows() == sch.input_law().rows());
  CHECK(back2.t2_kernel().rows() == sch.t2_kernel().rows());
}

#include "sdkey/channel.hpp"

#include <cmath>
#include <sstream>

#include "sdkey/error.hpp"

namespace sdkey {

namespace {

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << name << " = " << p << " is not a probability";
    throw ValidationError(os.str());
  }
}

Alphabet binary(const std::string& name) { return Alphabet(name, {"0", "1"}); }

void require_vars(const std::vector<Variable>& got, const std::vector<Variable>& want,
                  const std::string& what) {
  if (got.size() != want.size()) throw ValidationError(what + ": wrong number of variables");
  for (std::size_t i = 0; i < got.size(); ++i) {
    if (got[i].name != want[i].name) {
      throw ValidationError(what + ": expected variable " + want[i].name + ", found " + got[i].name);
    }
    if (!(got[i].alphabet == want[i].alphabet)) {
      throw ValidationError(what + ": alphabet of " + want[i].name + " does not match the channel");
    }
  }
}

}  // namespace

SdMacSpec::SdMacSpec(Alphabet s, Alphabet t, Alphabet x1, Alphabet x2, Alphabet y, Alphabet z,
                     std::vector<double> state_pmf, std::vector<double> degrade_rows,
                     std::vector<double> channel_rows)
    : s_(std::move(s)),
      t_(std::move(t)),
      x1_(std::move(x1)),
      x2_(std::move(x2)),
      y_(std::move(y)),
      z_(std::move(z)),
      state_pmf_({{var::S, s_}}, std::move(state_pmf)),
      degrade_({{var::S, s_}}, {{var::T, t_}}, std::move(degrade_rows)),
      channel_({{var::X1, x1_}, {var::X2, x2_}, {var::S, s_}}, {{var::Y, y_}, {var::Z, z_}},
               std::move(channel_rows)) {}

bool SdMacSpec::operator==(const SdMacSpec& o) const {
  return s_ == o.s_ && t_ == o.t_ && x1_ == o.x1_ && x2_ == o.x2_ && y_ == o.y_ && z_ == o.z_ &&
         state_pmf_.table() == o.state_pmf_.table() && degrade_.rows() == o.degrade_.rows() &&
         channel_.rows() == o.channel_.rows();
}

AuxiliaryScheme::AuxiliaryScheme(ConditionalPmf u_kernel, ConditionalPmf v_kernel,
                                 ConditionalPmf x1_kernel, ConditionalPmf x2_kernel)
    : u_(std::move(u_kernel)), v_(std::move(v_kernel)), x1_(std::move(x1_kernel)), x2_(std::move(x2_kernel)) {
  if (u_.target().size() != 1 || u_.target()[0].name != var::U) {
    throw ValidationError("u_kernel must have target U");
  }
  if (v_.target().size() != 1 || v_.target()[0].name != var::V) {
    throw ValidationError("v_kernel must have target V");
  }
  if (u_.given().size() != 1 || u_.given()[0].name != var::S) {
    throw ValidationError("u_kernel must be conditioned on S");
  }
  const Variable s = u_.given()[0];
  require_vars(v_.given(), {u(), s}, "v_kernel");
  if (x1_.target().size() != 1 || x1_.target()[0].name != var::X1) {
    throw ValidationError("x1_kernel must have target X1");
  }
  if (x2_.target().size() != 1 || x2_.target()[0].name != var::X2) {
    throw ValidationError("x2_kernel must have target X2");
  }
  require_vars(x1_.given(), {u(), v(), s}, "x1_kernel");
  require_vars(x2_.given(), {u(), v(), s}, "x2_kernel");
}

void AuxiliaryScheme::check_compatible(const SdMacSpec& spec) const {
  require_vars(u_.given(), {spec.s()}, "auxiliary scheme u_kernel");
  require_vars(x1_.target(), {spec.x1()}, "auxiliary scheme x1_kernel");
  require_vars(x2_.target(), {spec.x2()}, "auxiliary scheme x2_kernel");
}

Round2Scheme::Round2Scheme(ConditionalPmf input_law, ConditionalPmf t1_kernel, ConditionalPmf t2_kernel)
    : input_(std::move(input_law)), t1_(std::move(t1_kernel)), t2_(std::move(t2_kernel)) {
  if (input_.given().size() != 1 || input_.given()[0].name != var::S || input_.target().size() != 2 ||
      input_.target()[0].name != var::X1 || input_.target()[1].name != var::X2) {
    throw ValidationError("input_law must be p(X1,X2|S)");
  }
  if (t1_.target().size() != 1 || t1_.target()[0].name != var::T1) {
    throw ValidationError("t1_kernel must have target T1");
  }
  if (t2_.target().size() != 1 || t2_.target()[0].name != var::T2) {
    throw ValidationError("t2_kernel must have target T2");
  }
  if (t1_.given().size() != 2 || t1_.given()[0].name != var::Y || t1_.given()[1].name != var::T) {
    throw ValidationError("t1_kernel must be conditioned on (Y,T)");
  }
  require_vars(t2_.given(), t1_.given(), "t2_kernel");
}

void Round2Scheme::check_compatible(const SdMacSpec& spec) const {
  require_vars(input_.given(), {spec.s()}, "round-2 input_law");
  require_vars(input_.target(), {spec.x1(), spec.x2()}, "round-2 input_law");
  require_vars(t1_.given(), {spec.y(), spec.t()}, "round-2 t1_kernel");
}

JointPmf full_joint_round1(const SdMacSpec& spec, const AuxiliaryScheme& aux) {
  aux.check_compatible(spec);
  JointPmf j = compose(spec.state_pmf(), spec.degrade_kernel());
  j = compose(j, aux.u_kernel());
  j = compose(j, aux.v_kernel());
  j = compose(j, aux.x1_kernel());
  j = compose(j, aux.x2_kernel());
  return compose(j, spec.channel_kernel());
}

JointPmf channel_joint(const SdMacSpec& spec, const ConditionalPmf& input_law) {
  JointPmf j = compose(spec.state_pmf(), spec.degrade_kernel());
  j = compose(j, input_law);
  return compose(j, spec.channel_kernel());
}

JointPmf full_joint_round2(const SdMacSpec& spec, const Round2Scheme& scheme) {
  scheme.check_compatible(spec);
  JointPmf j = channel_joint(spec, scheme.input_law());
  j = compose(j, scheme.t1_kernel());
  return compose(j, scheme.t2_kernel());
}

JointPmf reduced_joint_round1(const SdMacSpec& spec, const AuxiliaryScheme& aux) {
  aux.check_compatible(spec);
  const std::size_t ns = spec.s().alphabet.size();
  const std::size_t nt = spec.t().alphabet.size();
  const std::size_t nu = aux.u().alphabet.size();
  const std::size_t nv = aux.v().alphabet.size();
  const std::size_t nx1 = spec.x1().alphabet.size();
  const std::size_t nx2 = spec.x2().alphabet.size();
  const std::size_t nyz = spec.y().alphabet.size() * spec.z().alphabet.size();
  const auto& ch = spec.channel_kernel();

  std::vector<double> out(ns * nt * nu * nv * nyz, 0.0);
  std::vector<double> yz(nyz);
  for (std::size_t s = 0; s < ns; ++s) {
    const double ps = spec.state_pmf().table()[s];
    if (ps == 0.0) continue;
    for (std::size_t u = 0; u < nu; ++u) {
      const double pu = aux.u_kernel().prob(s, u);
      if (pu == 0.0) continue;
      for (std::size_t v = 0; v < nv; ++v) {
        const double pv = aux.v_kernel().prob(u * ns + s, v);
        if (pv == 0.0) continue;
        const std::size_t g = (u * nv + v) * ns + s;
        std::fill(yz.begin(), yz.end(), 0.0);
        for (std::size_t x1 = 0; x1 < nx1; ++x1) {
          const double p1 = aux.x1_kernel().prob(g, x1);
          if (p1 == 0.0) continue;
          for (std::size_t x2 = 0; x2 < nx2; ++x2) {
            const double p2 = aux.x2_kernel().prob(g, x2);
            if (p2 == 0.0) continue;
            auto row = ch.row((x1 * nx2 + x2) * ns + s);
            for (std::size_t k = 0; k < nyz; ++k) yz[k] += p1 * p2 * row[k];
          }
        }
        const double base = ps * pu * pv;
        for (std::size_t t = 0; t < nt; ++t) {
          const double pt = spec.degrade_kernel().prob(s, t);
          if (pt == 0.0) continue;
          double* cell = &out[(((s * nt + t) * nu + u) * nv + v) * nyz];
          for (std::size_t k = 0; k < nyz; ++k) cell[k] = base * pt * yz[k];
        }
      }
    }
  }
  return JointPmf({spec.s(), spec.t(), aux.u(), aux.v(), spec.y(), spec.z()}, std::move(out));
}

SdMacSpec build_stuck_at(double p, EveMode eve) {
  require_probability(p, "p");
  Alphabet s("S", {"stuck0", "stuck1", "clean"});
  Alphabet z = eve == EveMode::reads_memory ? binary("Z") : Alphabet::singleton("Z");
  const std::size_t nz = z.size();
  // rows: (x1, x2 = "-", s), entries (y, z)
  std::vector<double> rows;
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t st = 0; st < 3; ++st) {
      const std::size_t y = st == 0 ? 0 : st == 1 ? 1 : x;
      std::vector<double> row(2 * nz, 0.0);
      row[y * nz + (nz == 2 ? y : 0)] = 1.0;
      rows.insert(rows.end(), row.begin(), row.end());
    }
  }
  return SdMacSpec(s, Alphabet::singleton("T"), binary("X1"), Alphabet::singleton("X2"), binary("Y"),
                   std::move(z), {p / 2.0, p / 2.0, 1.0 - p}, {1.0, 1.0, 1.0}, std::move(rows));
}

SdMacSpec build_modulo_additive(double p_s, double p1, double p2, NoiseCoupling coupling,
                                std::vector<std::string>* warnings) {
  require_probability(p_s, "p_s");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  if (!(p1 <= p2 && p2 <= 0.5)) {
    std::ostringstream os;
    os << "modulo-additive parameters p1 = " << p1 << ", p2 = " << p2
       << " are outside the regime 0 <= p1 <= p2 <= 1/2";
    if (coupling == NoiseCoupling::degraded_cascade) {
      throw ValidationError(os.str() + "; a degraded cascade cannot be built");
    }
    if (warnings) warnings->push_back(os.str());
  }
  double cascade = 0.0;
  if (coupling == NoiseCoupling::degraded_cascade && p1 < 0.5) cascade = (p2 - p1) / (1.0 - 2.0 * p1);

  std::vector<double> rows;
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t b = x1 ^ x2 ^ s;
        double row[4] = {0, 0, 0, 0};
        for (std::size_t y = 0; y < 2; ++y) {
          const double py = (y == b) ? 1.0 - p1 : p1;
          for (std::size_t z = 0; z < 2; ++z) {
            double pz;
            if (coupling == NoiseCoupling::independent) {
              pz = (z == b) ? 1.0 - p2 : p2;
            } else {
              pz = (z == y) ? 1.0 - cascade : cascade;
            }
            row[y * 2 + z] = py * pz;
          }
        }
        rows.insert(rows.end(), row, row + 4);
      }
    }
  }
  return SdMacSpec(binary("S"), Alphabet::singleton("T"), binary("X1"), binary("X2"), binary("Y"),
                   binary("Z"), {1.0 - p_s, p_s}, {1.0, 1.0}, std::move(rows));
}

SdMacSpec build_parallel_bsc(double p_s, double p1, double p2, double p_e, EveTap tap) {
  require_probability(p_s, "p_s");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  require_probability(p_e, "p_e");
  std::vector<double> rows;
  for (std::size_t x1 = 0; x1 < 2; ++x1) {
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      for (std::size_t s = 0; s < 2; ++s) {
        const std::size_t b1 = x1 ^ s;
        const std::size_t b2 = x2 ^ s;
        const std::size_t e = tap == EveTap::sum ? (x1 ^ x2) : x2;
        for (std::size_t y1 = 0; y1 < 2; ++y1) {
          for (std::size_t y2 = 0; y2 < 2; ++y2) {
            const double py = (y1 == b1 ? 1.0 - p1 : p1) * (y2 == b2 ? 1.0 - p2 : p2);
            for (std::size_t z = 0; z < 2; ++z) rows.push_back(py * (z == e ? 1.0 - p_e : p_e));
          }
        }
      }
    }
  }
  return SdMacSpec(binary("S"), Alphabet::singleton("T"), binary("X1"), binary("X2"),
                   Alphabet("Y", {"00", "01", "10", "11"}), binary("Z"), {1.0 - p_s, p_s}, {1.0, 1.0},
                   std::move(rows));
}

SdMacSpec with_constant_eavesdropper(const SdMacSpec& spec) {
  const auto& ch = spec.channel_kernel();
  const std::size_t ny = spec.y().alphabet.size();
  const std::size_t nz = spec.z().alphabet.size();
  std::vector<double> rows;
  for (std::size_t g = 0; g < ch.given_count(); ++g) {
    for (std::size_t y = 0; y < ny; ++y) {
      double sum = 0.0;
      for (std::size_t z = 0; z < nz; ++z) sum += ch.prob(g, y * nz + z);
      rows.push_back(sum);
    }
  }
  return SdMacSpec(spec.s().alphabet, spec.t().alphabet, spec.x1().alphabet, spec.x2().alphabet,
                   spec.y().alphabet, Alphabet::singleton("Z"), spec.state_pmf().table(),
                   spec.degrade_kernel().rows(), std::move(rows));
}

AuxiliaryScheme trivial_scheme(const SdMacSpec& spec) {
  const Variable u{var::U, Alphabet::singleton("U")};
  const Variable v{var::V, Alphabet::singleton("V")};
  const std::size_t ns = spec.s().alphabet.size();
  std::vector<std::size_t> zeros(ns, 0);
  return AuxiliaryScheme(ConditionalPmf::deterministic({spec.s()}, {u}, zeros),
                         ConditionalPmf::deterministic({u, spec.s()}, {v}, zeros),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x1()}, zeros),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x2()}, zeros));
}

AuxiliaryScheme copy_input_scheme(const SdMacSpec& spec, double alpha) {
  require_probability(alpha, "alpha");
  if (spec.x1().alphabet.size() != 2 || spec.x2().alphabet.size() != 2) {
    throw ValidationError("copy_input_scheme needs binary X1 and X2");
  }
  const Variable u{var::U, Alphabet::singleton("U")};
  const Variable v{var::V, binary("V")};
  const std::size_t ns = spec.s().alphabet.size();
  std::vector<double> vrows;
  for (std::size_t s = 0; s < ns; ++s) {
    vrows.push_back(1.0 - alpha);
    vrows.push_back(alpha);
  }
  std::vector<std::size_t> xmap;
  for (std::size_t vv = 0; vv < 2; ++vv) {
    for (std::size_t s = 0; s < ns; ++s) xmap.push_back(vv);
  }
  return AuxiliaryScheme(ConditionalPmf::deterministic({spec.s()}, {u}, std::vector<std::size_t>(ns, 0)),
                         ConditionalPmf({u, spec.s()}, {v}, std::move(vrows)),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x1()}, xmap),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x2()}, xmap));
}

AuxiliaryScheme single_input_scheme(const SdMacSpec& spec, double alpha) {
  require_probability(alpha, "alpha");
  if (spec.x1().alphabet.size() != 2) throw ValidationError("single_input_scheme needs binary X1");
  const Variable u{var::U, Alphabet::singleton("U")};
  const Variable v{var::V, binary("V")};
  const std::size_t ns = spec.s().alphabet.size();
  std::vector<double> vrows;
  for (std::size_t s = 0; s < ns; ++s) {
    vrows.push_back(1.0 - alpha);
    vrows.push_back(alpha);
  }
  std::vector<std::size_t> xmap;
  for (std::size_t vv = 0; vv < 2; ++vv) {
    for (std::size_t s = 0; s < ns; ++s) xmap.push_back(vv);
  }
  return AuxiliaryScheme(ConditionalPmf::deterministic({spec.s()}, {u}, std::vector<std::size_t>(ns, 0)),
                         ConditionalPmf({u, spec.s()}, {v}, std::move(vrows)),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x1()}, xmap),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x2()},
                                                       std::vector<std::size_t>(2 * ns, 0)));
}

ConditionalPmf uniform_input_law(const SdMacSpec& spec) {
  return ConditionalPmf::constant({spec.s()}, JointPmf::uniform({spec.x1(), spec.x2()}));
}

ConditionalPmf bernoulli_input_law(const SdMacSpec& spec, double a1, double a2) {
  require_probability(a1, "a1");
  require_probability(a2, "a2");
  if (spec.x1().alphabet.size() != 2 || spec.x2().alphabet.size() != 2) {
    throw ValidationError("Bernoulli input law needs binary inputs");
  }
  const std::vector<double> cells{(1 - a1) * (1 - a2), (1 - a1) * a2, a1 * (1 - a2), a1 * a2};
  return ConditionalPmf::constant({spec.s()}, JointPmf({spec.x1(), spec.x2()}, cells));
}

Round2Scheme binary_test_channel_scheme(const SdMacSpec& spec, double q1, double q2) {
  require_probability(q1, "q1");
  require_probability(q2, "q2");
  if (spec.y().alphabet.size() != 2) throw ValidationError("binary test channel needs binary Y");
  const std::size_t nt = spec.t().alphabet.size();
  auto kernel = [&](const std::string& name, double q) {
    std::vector<double> rows;
    for (std::size_t y = 0; y < 2; ++y) {
      for (std::size_t t = 0; t < nt; ++t) {
        rows.push_back(y == 0 ? 1.0 - q : q);
        rows.push_back(y == 0 ? q : 1.0 - q);
      }
    }
    return ConditionalPmf({spec.y(), spec.t()}, {{name, binary(name)}}, std::move(rows));
  };
  return Round2Scheme(uniform_input_law(spec), kernel(var::T1, q1), kernel(var::T2, q2));
}

Round2Scheme parallel_test_channel_scheme(const SdMacSpec& spec, double q1, double q2, double input_bias) {
  require_probability(q1, "q1");
  require_probability(q2, "q2");
  if (spec.y().alphabet.size() != 4) {
    throw ValidationError("parallel test channel needs the four-symbol two-component output");
  }
  const std::size_t nt = spec.t().alphabet.size();
  auto kernel = [&](const std::string& name, double q, int component) {
    std::vector<double> rows;
    for (std::size_t y = 0; y < 4; ++y) {
      const std::size_t bit = component == 1 ? (y >> 1) : (y & 1);
      for (std::size_t t = 0; t < nt; ++t) {
        rows.push_back(bit == 0 ? 1.0 - q : q);
        rows.push_back(bit == 0 ? q : 1.0 - q);
      }
    }
    return ConditionalPmf({spec.y(), spec.t()}, {{name, binary(name)}}, std::move(rows));
  };
  return Round2Scheme(bernoulli_input_law(spec, input_bias, input_bias), kernel(var::T1, q1, 1),
                      kernel(var::T2, q2, 2));
}

}  // namespace sdkey

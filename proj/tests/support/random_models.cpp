#include "random_models.hpp"

#include <cmath>

namespace sdkey::testing {

std::vector<double> random_row(Rng& rng, std::size_t k) {
  std::vector<double> row(k);
  const bool sparse = k > 1 && rng.index(4) == 0;
  double sum = 0.0;
  for (auto& x : row) {
    x = -std::log(1.0 - rng.uniform());
    if (sparse && rng.index(2) == 0) x = 0.0;
    sum += x;
  }
  if (sum == 0.0) {
    row[rng.index(k)] = 1.0;
    return row;
  }
  for (auto& x : row) x /= sum;
  return row;
}

std::vector<double> random_rows(Rng& rng, std::size_t rows, std::size_t k) {
  std::vector<double> out;
  out.reserve(rows * k);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = random_row(rng, k);
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

JointPmf random_pmf(Rng& rng, const std::vector<std::size_t>& sizes) {
  std::vector<Variable> vars;
  std::size_t cells = 1;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const std::string name(1, static_cast<char>('A' + i));
    vars.push_back({name, Alphabet::range(name, sizes[i])});
    cells *= sizes[i];
  }
  return JointPmf(std::move(vars), random_row(rng, cells));
}

SdMacSpec random_binary_spec(Rng& rng, bool cascade, bool observe_state) {
  const Alphabet b = Alphabet::range("bit", 2);
  std::vector<double> channel;
  if (cascade) {
    const auto z_given_y = random_rows(rng, 2, 2);
    for (std::size_t g = 0; g < 8; ++g) {
      const auto y = random_row(rng, 2);
      for (std::size_t yv = 0; yv < 2; ++yv) {
        for (std::size_t z = 0; z < 2; ++z) channel.push_back(y[yv] * z_given_y[yv * 2 + z]);
      }
    }
  } else {
    channel = random_rows(rng, 8, 4);
  }
  auto state = random_row(rng, 2);
  auto degrade = random_rows(rng, 2, 2);
  if (!observe_state) {
    return SdMacSpec(b, Alphabet::singleton("T"), b, b, b, b, std::move(state), {1.0, 1.0}, std::move(channel));
  }
  return SdMacSpec(b, b, b, b, b, b, std::move(state), std::move(degrade), std::move(channel));
}

AuxiliaryScheme random_aux(Rng& rng, const SdMacSpec& spec, std::size_t nu, std::size_t nv,
                           bool deterministic_inputs) {
  const Variable u{var::U, Alphabet::range("U", nu)};
  const Variable v{var::V, Alphabet::range("V", nv)};
  const std::size_t ns = spec.s().alphabet.size();
  ConditionalPmf uk({spec.s()}, {u}, random_rows(rng, ns, nu));
  ConditionalPmf vk({u, spec.s()}, {v}, random_rows(rng, nu * ns, nv));
  auto input = [&](const Variable& x) {
    const std::size_t rows = nu * nv * ns;
    if (!deterministic_inputs) return ConditionalPmf({u, v, spec.s()}, {x}, random_rows(rng, rows, x.alphabet.size()));
    std::vector<std::size_t> map(rows);
    for (auto& m : map) m = rng.index(x.alphabet.size());
    return ConditionalPmf::deterministic({u, v, spec.s()}, {x}, map);
  };
  ConditionalPmf x1 = input(spec.x1());
  ConditionalPmf x2 = input(spec.x2());
  return AuxiliaryScheme(std::move(uk), std::move(vk), std::move(x1), std::move(x2));
}

Round2Scheme random_round2_scheme(Rng& rng, const SdMacSpec& spec) {
  const std::size_t ns = spec.s().alphabet.size();
  const std::size_t nx = spec.x1().alphabet.size() * spec.x2().alphabet.size();
  const std::size_t nyt = spec.y().alphabet.size() * spec.t().alphabet.size();
  ConditionalPmf input({spec.s()}, {spec.x1(), spec.x2()}, random_rows(rng, ns, nx));
  auto test_channel = [&](const std::string& name) {
    return ConditionalPmf({spec.y(), spec.t()}, {{name, Alphabet::range(name, 2)}}, random_rows(rng, nyt, 2));
  };
  ConditionalPmf t1 = test_channel(var::T1);
  ConditionalPmf t2 = test_channel(var::T2);
  return Round2Scheme(std::move(input), std::move(t1), std::move(t2));
}

}  // namespace sdkey::testing

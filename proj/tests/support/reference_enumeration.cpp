#include "reference_enumeration.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <unordered_map>
#include <vector>

namespace sdkey::testing {

namespace {

using Seq = std::vector<std::uint8_t>;

double plogp_sum(const std::vector<double>& masses) {
  double h = 0.0;
  for (double m : masses) {
    if (m > 0.0) h -= m * std::log2(m);
  }
  return h;
}

// Entropy of a sparse distribution stored in a map.
template <typename Key>
double entropy_of(const std::map<Key, double>& m) {
  double h = 0.0;
  for (const auto& [k, p] : m) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

// Counts the joint type of `seqs` (all length n) over a table with the given
// dimensions and compares it cell by cell with `probs`.
bool strongly_typical(const std::vector<const Seq*>& seqs, const std::vector<std::size_t>& dims,
                      const std::vector<double>& probs, double eps) {
  const std::size_t n = seqs[0]->size();
  std::vector<int> count(probs.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t cell = 0;
    for (std::size_t k = 0; k < dims.size(); ++k) cell = cell * dims[k] + (*seqs[k])[i];
    ++count[cell];
  }
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (count[c] > 0 && probs[c] == 0.0) return false;
    if (std::abs(static_cast<double>(count[c]) / static_cast<double>(n) - probs[c]) > eps) return false;
  }
  return true;
}

// Visits every length-n sequence over the cells with positive mass.
void enumerate(std::size_t n, const std::vector<double>& cell_probs,
               const std::function<void(const std::vector<std::size_t>&, double)>& visit) {
  std::vector<std::size_t> support;
  for (std::size_t c = 0; c < cell_probs.size(); ++c) {
    if (cell_probs[c] > 0.0) support.push_back(c);
  }
  std::vector<std::size_t> seq(n);
  std::function<void(std::size_t, double)> rec = [&](std::size_t depth, double p) {
    if (depth == n) {
      visit(seq, p);
      return;
    }
    for (std::size_t c : support) {
      seq[depth] = c;
      rec(depth + 1, p * cell_probs[c]);
    }
  };
  if (!support.empty()) rec(0, 1.0);
}

std::size_t deterministic_symbol(const ConditionalPmf& k, std::size_t row) {
  const auto r = k.row(row);
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (r[j] == 1.0) return j;
  }
  return 0;
}

}  // namespace

Round1Leakage reference_round1_leakage(const SdMacSpec& spec, const AuxiliaryScheme& aux, const Round1Config& cfg,
                                       const SuperpositionCodebook& cb) {
  const std::size_t n = cfg.n;
  const std::size_t ns = spec.s().alphabet.size();
  const std::size_t nu = aux.u().alphabet.size();
  const std::size_t nv = aux.v().alphabet.size();
  const std::size_t nx2 = spec.x2().alphabet.size();
  const std::size_t ny = spec.y().alphabet.size();
  const std::size_t nz = spec.z().alphabet.size();
  const auto& ps = spec.state_pmf().table();

  // p(s, u) and p(s, u, v), in that variable order.
  std::vector<double> p_su(ns * nu, 0.0), p_suv(ns * nu * nv, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t u = 0; u < nu; ++u) {
      const double a = ps[s] * aux.u_kernel().prob(s, u);
      p_su[s * nu + u] = a;
      for (std::size_t v = 0; v < nv; ++v) p_suv[(s * nu + u) * nv + v] = a * aux.v_kernel().prob(u * ns + s, v);
    }
  }
  // p(z | x1, x2, s) by summing the channel over y.
  auto z_law = [&](std::size_t x1, std::size_t x2, std::size_t s) {
    std::vector<double> pz(nz, 0.0);
    const auto row = spec.channel_kernel().row((x1 * nx2 + x2) * ns + s);
    for (std::size_t y = 0; y < ny; ++y) {
      for (std::size_t z = 0; z < nz; ++z) pz[z] += row[y * nz + z];
    }
    return pz;
  };

  std::map<std::pair<std::uint32_t, std::vector<std::size_t>>, double> joint;  // (k, z^n)
  std::vector<double> p_key(cb.bins, 0.0);

  enumerate(n, ps, [&](const std::vector<std::size_t>& s_cells, double p_s) {
    Seq s(s_cells.begin(), s_cells.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> cands;
    std::size_t centers = 0, widest = 0;
    for (std::uint32_t a = 0; a < cb.u_words.size(); ++a) {
      const Seq& u = cb.u_words[a];
      if (!strongly_typical({&s, &u}, {ns, nu}, p_su, cfg.eps)) continue;
      ++centers;
      std::size_t sat = 0;
      for (std::uint32_t b = 0; b < cb.v_words[a].size(); ++b) {
        if (strongly_typical({&s, &u, &cb.v_words[a][b]}, {ns, nu, nv}, p_suv, cfg.eps)) {
          cands.emplace_back(a, b);
          ++sat;
        }
      }
      widest = std::max(widest, sat);
    }
    const double pairs = static_cast<double>(centers) * static_cast<double>(widest);
    const bool conf_ok = (pairs > 1.0 ? std::log2(pairs) : 0.0) <= static_cast<double>(n) * cfg.r_c + 1e-9;

    std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, double>> picks;
    if (cands.empty()) picks.push_back({{0, 0}, 1.0});
    else if (cfg.tie_break == TieBreak::lowest_index) picks.push_back({cands.front(), 1.0});
    else for (const auto& c : cands) picks.push_back({c, 1.0 / static_cast<double>(cands.size())});

    for (const auto& [idx, w] : picks) {
      const auto other = conf_ok ? idx : std::pair<std::uint32_t, std::uint32_t>{0, 0};
      const std::uint32_t k = cb.bin_of[idx.first][idx.second];
      std::vector<std::vector<double>> per_symbol(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r1 = (cb.u_words[idx.first][i] * nv + cb.v_words[idx.first][idx.second][i]) * ns + s[i];
        const std::size_t r2 =
            (cb.u_words[other.first][i] * nv + cb.v_words[other.first][other.second][i]) * ns + s[i];
        per_symbol[i] = z_law(deterministic_symbol(aux.x1_kernel(), r1), deterministic_symbol(aux.x2_kernel(), r2),
                              s[i]);
      }
      // z^n odometer
      std::vector<std::size_t> z(n, 0);
      for (;;) {
        double pz = 1.0;
        for (std::size_t i = 0; i < n && pz > 0.0; ++i) pz *= per_symbol[i][z[i]];
        if (pz > 0.0) {
          const double m = p_s * w * pz;
          joint[{k, z}] += m;
          p_key[k] += m;
        }
        std::size_t pos = n;
        while (pos > 0 && ++z[pos - 1] == nz) z[--pos] = 0;
        if (pos == 0) break;
      }
    }
  });

  std::map<std::vector<std::size_t>, double> p_z;
  std::map<std::pair<std::uint32_t, std::vector<std::size_t>>, double>& p_kz = joint;
  for (const auto& [kz, m] : p_kz) p_z[kz.second] += m;
  Round1Leakage out;
  out.key_entropy = plogp_sum(p_key);
  const double mi = out.key_entropy + entropy_of(p_z) - entropy_of(p_kz);
  out.leakage_per_symbol = std::max(0.0, mi) / static_cast<double>(n);
  return out;
}

Round2Leakage reference_round2_leakage(const SdMacSpec& spec, const Round2Scheme& scheme, const Round2Config& cfg,
                                       const CodebookPair& cbs) {
  const std::size_t n = cfg.n;
  const std::size_t ns = spec.s().alphabet.size();
  const std::size_t nt = spec.t().alphabet.size();
  const std::array<std::size_t, 2> nx{spec.x1().alphabet.size(), spec.x2().alphabet.size()};
  const std::size_t ny = spec.y().alphabet.size();
  const std::size_t nz = spec.z().alphabet.size();
  const std::array<std::size_t, 2> nti{scheme.t1_kernel().target_count(), scheme.t2_kernel().target_count()};

  // Per-symbol law P(s, t, x1, x2, y, z).
  auto cell = [&](std::size_t s, std::size_t t, std::size_t x1, std::size_t x2, std::size_t y, std::size_t z) {
    return spec.state_pmf().table()[s] * spec.degrade_kernel().prob(s, t) *
           scheme.input_law().prob(s, x1 * nx[1] + x2) *
           spec.channel_kernel().prob((x1 * nx[1] + x2) * ns + s, y * nz + z);
  };
  auto for_cells = [&](auto&& f) {
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t x1 = 0; x1 < nx[0]; ++x1)
          for (std::size_t x2 = 0; x2 < nx[1]; ++x2)
            for (std::size_t y = 0; y < ny; ++y)
              for (std::size_t z = 0; z < nz; ++z) f(s, t, x1, x2, y, z, cell(s, t, x1, x2, y, z));
  };

  // Receiver test tables p(t_i, y, t).
  std::array<std::vector<double>, 2> p_tyt;
  for (int i = 0; i < 2; ++i) {
    p_tyt[i].assign(nti[i] * ny * nt, 0.0);
    const ConditionalPmf& k = scheme.t_kernel(i + 1);
    for_cells([&](std::size_t, std::size_t t, std::size_t, std::size_t, std::size_t y, std::size_t, double p) {
      for (std::size_t a = 0; a < nti[i]; ++a) p_tyt[i][(a * ny + y) * nt + t] += p * k.prob(y * nt + t, a);
    });
  }

  struct Pick {
    std::uint32_t psi, key;
    double w;
  };
  // Receiver choices per (y^n, t^n), memoized on the joint index.
  std::array<std::unordered_map<std::uint64_t, std::vector<Pick>>, 2> memo;
  auto picks = [&](int i, const Seq& y, const Seq& t) -> const std::vector<Pick>& {
    std::uint64_t key = 0;
    for (std::size_t k = 0; k < n; ++k) key = key * (ny * nt) + y[k] * nt + t[k];
    auto it = memo[i].find(key);
    if (it != memo[i].end()) return it->second;
    const auto& cb = cbs[i];
    std::vector<std::uint32_t> hits;
    for (std::uint32_t m = 0; m < cb.t_words.size(); ++m) {
      if (strongly_typical({&cb.t_words[m], &y, &t}, {nti[i], ny, nt}, p_tyt[i], cfg.eps)) hits.push_back(m);
    }
    std::vector<Pick> out;
    if (hits.empty()) out.push_back({cb.bin_of[0], cb.subbin_of[0], 1.0});
    else if (cfg.tie_break == TieBreak::lowest_index) out.push_back({cb.bin_of[hits[0]], cb.subbin_of[hits[0]], 1.0});
    else
      for (auto m : hits) out.push_back({cb.bin_of[m], cb.subbin_of[m], 1.0 / static_cast<double>(hits.size())});
    return memo[i].emplace(key, std::move(out)).first->second;
  };

  Round2Leakage out;

  // Eavesdropper terms over (y, t, z)^n.
  {
    std::vector<double> q(ny * nt * nz, 0.0);
    for_cells([&](std::size_t, std::size_t t, std::size_t, std::size_t, std::size_t y, std::size_t z, double p) {
      q[(y * nt + t) * nz + z] += p;
    });
    using Obs = std::tuple<std::vector<std::size_t>, std::uint32_t, std::uint32_t>;  // (z^n, psi1, psi2)
    std::array<std::map<std::pair<std::uint32_t, Obs>, double>, 2> with_key;
    std::map<Obs, double> obs;
    std::array<std::map<std::uint32_t, double>, 2> keys;
    enumerate(n, q, [&](const std::vector<std::size_t>& cells, double p) {
      Seq y(n), t(n);
      std::vector<std::size_t> z(n);
      for (std::size_t k = 0; k < n; ++k) {
        z[k] = cells[k] % nz;
        t[k] = static_cast<std::uint8_t>((cells[k] / nz) % nt);
        y[k] = static_cast<std::uint8_t>(cells[k] / nz / nt);
      }
      const auto& a1 = picks(0, y, t);
      const auto& a2 = picks(1, y, t);
      for (const auto& a : a1) {
        for (const auto& b : a2) {
          const double m = p * a.w * b.w;
          const Obs o{z, a.psi, b.psi};
          obs[o] += m;
          with_key[0][{a.key, o}] += m;
          with_key[1][{b.key, o}] += m;
          keys[0][a.key] += m;
          keys[1][b.key] += m;
        }
      }
    });
    for (int i = 0; i < 2; ++i) {
      out.key_entropy[i] = entropy_of(keys[i]);
      const double mi = out.key_entropy[i] + entropy_of(obs) - entropy_of(with_key[i]);
      out.leak_eve[i] = std::max(0.0, mi) / static_cast<double>(n);
    }
  }

  // Cross terms over (x_ic, s, y, t)^n.
  for (int i = 0; i < 2; ++i) {
    const int ic = 1 - i;
    std::vector<double> q(nx[ic] * ns * ny * nt, 0.0);
    for_cells([&](std::size_t s, std::size_t t, std::size_t x1, std::size_t x2, std::size_t y, std::size_t, double p) {
      const std::size_t xo = ic == 0 ? x1 : x2;
      q[((xo * ns + s) * ny + y) * nt + t] += p;
    });
    using Obs = std::tuple<std::vector<std::size_t>, std::uint32_t, std::uint32_t, std::uint32_t>;
    std::map<std::pair<std::uint32_t, Obs>, double> with_key;
    std::map<Obs, double> obs;
    std::map<std::uint32_t, double> keys;
    enumerate(n, q, [&](const std::vector<std::size_t>& cells, double p) {
      Seq y(n), t(n);
      std::vector<std::size_t> w(n);
      for (std::size_t k = 0; k < n; ++k) {
        t[k] = static_cast<std::uint8_t>(cells[k] % nt);
        y[k] = static_cast<std::uint8_t>((cells[k] / nt) % ny);
        w[k] = cells[k] / nt / ny;
      }
      const auto& own = picks(i, y, t);
      const auto& oth = picks(ic, y, t);
      for (const auto& a : own) {
        for (const auto& b : oth) {
          const double m = p * a.w * b.w;
          const std::uint32_t psi1 = i == 0 ? a.psi : b.psi;
          const std::uint32_t psi2 = i == 0 ? b.psi : a.psi;
          const Obs o{w, b.key, psi1, psi2};
          obs[o] += m;
          with_key[{a.key, o}] += m;
          keys[a.key] += m;
        }
      }
    });
    const double mi = entropy_of(keys) + entropy_of(obs) - entropy_of(with_key);
    out.leak_cross[i] = std::max(0.0, mi) / static_cast<double>(n);
  }
  return out;
}

}  // namespace sdkey::testing

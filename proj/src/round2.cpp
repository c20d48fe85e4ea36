#include "sdkey/round2.hpp"

#include <cmath>
#include <string>

#include "sdkey/error.hpp"
#include "sdkey/parallel.hpp"

namespace sdkey {

namespace {

constexpr std::uint64_t kCodebookStream = 0xD0B1EB1AULL;
constexpr std::uint64_t kTrialStream = 0x7121A25ULL;

void check_index(int i) {
  if (i != 1 && i != 2) throw ValidationError("transmitter index must be 1 or 2");
}

const std::string& t_name(int i) { return i == 1 ? var::T1 : var::T2; }
const std::string& x_name(int i) { return i == 1 ? var::X1 : var::X2; }

}  // namespace

void Round2Config::validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  for (int i = 0; i < 2; ++i) {
    const std::string tag = " of transmitter " + std::to_string(i + 1);
    if (!(rate_t[i] >= 0.0 && rate_bins[i] >= 0.0 && rate_subbins[i] >= 0.0)) {
      throw ValidationError("round-2 rates" + tag + " must be nonnegative");
    }
    if (rate_bins[i] + rate_subbins[i] > rate_t[i] + 1e-12) {
      throw ValidationError("rate_bins + rate_subbins" + tag + " exceeds rate_t");
    }
  }
  if (!(eps >= 0.0)) throw ValidationError("typicality eps must be nonnegative");
}

Round2System::Round2System(SdMacSpec spec, Round2Scheme scheme, Round2Config cfg)
    : spec_(std::move(spec)),
      scheme_(std::move(scheme)),
      cfg_(cfg),
      joint_(full_joint_round2(spec_, scheme_)) {
  cfg_.validate();
  for (const auto& v : joint_.variables()) {
    if (v.alphabet.size() > kMaxSymbols) {
      throw ValidationError("alphabet of " + v.name + " is too large for sequence simulation");
    }
  }
  ns_ = spec_.s().alphabet.size();
  nx2_ = spec_.x2().alphabet.size();
  nz_ = spec_.z().alphabet.size();
  using namespace var;
  for (int i = 1; i <= 2; ++i) {
    t_marginal_[i - 1] = joint_.marginal({t_name(i)}).table();
    receiver_test_.emplace_back(joint_.marginal({t_name(i), Y, T}), cfg_.eps);
    transmitter_test_.emplace_back(joint_.marginal({x_name(i), S, t_name(i)}), cfg_.eps);
    covering_[i - 1] = conditional_mutual_information(joint_, {t_name(i)}, {Y}, {T});
    packing_[i - 1] = conditional_mutual_information(joint_, {x_name(i), S}, {t_name(i)}, {T});
  }
}

std::span<const double> Round2System::channel_row(std::size_t x1, std::size_t x2, std::size_t s) const {
  return spec_.channel_kernel().row((x1 * nx2_ + x2) * ns_ + s);
}

CodebookPair Round2System::generate_t_codebooks(Rng& rng) const {
  CodebookPair out;
  for (int i = 0; i < 2; ++i) {
    const char* what = i == 0 ? "rate_t of transmitter 1" : "rate_t of transmitter 2";
    const std::size_t m = codebook_size(cfg_.n, cfg_.rate_t[i], cfg_.max_words, what);
    auto& cb = out[i];
    cb.bins = std::min(m, codebook_size(cfg_.n, cfg_.rate_bins[i], cfg_.max_words, "rate_bins"));
    cb.subbins = std::min(m, codebook_size(cfg_.n, cfg_.rate_subbins[i], cfg_.max_words, "rate_subbins"));
    cb.t_words.reserve(m);
    for (std::size_t k = 0; k < m; ++k) cb.t_words.push_back(sample_iid(rng, t_marginal_[i], cfg_.n));
    cb.bin_of = balanced_partition(rng, m, cb.bins);
    cb.subbin_of = balanced_partition(rng, m, cb.subbins);
  }
  return out;
}

std::vector<std::uint32_t> Round2System::receiver_candidates(int i, const DoubleBinnedCodebook& cb,
                                                             const Sequence& y_seq, const Sequence& t_seq) const {
  check_index(i);
  const auto& test = receiver_test_[i - 1];
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m < cb.size(); ++m) {
    if (test({&cb.t_words[m], &y_seq, &t_seq})) out.push_back(m);
  }
  return out;
}

ReceiverChoice Round2System::receiver_key_gen(int i, const DoubleBinnedCodebook& cb, const Sequence& y_seq,
                                              const Sequence& t_seq, Rng& rng) const {
  const auto cands = receiver_candidates(i, cb, y_seq, t_seq);
  ReceiverChoice c;
  if (!cands.empty()) {
    c.found = true;
    c.word = cfg_.tie_break == TieBreak::lowest_index ? cands.front() : cands[rng.index(cands.size())];
  }
  c.psi = cb.bin_of[c.word];
  c.key = cb.subbin_of[c.word];
  return c;
}

Reconstruction Round2System::transmitter_reconstruct(int i, const Sequence& x_seq, const Sequence& s_seq,
                                                     std::uint32_t psi, const DoubleBinnedCodebook& cb) const {
  check_index(i);
  const auto& test = transmitter_test_[i - 1];
  Reconstruction r;
  bool first_in_bin = true;
  std::size_t hits = 0;
  for (std::uint32_t m = 0; m < cb.size(); ++m) {
    if (cb.bin_of[m] != psi) continue;
    if (first_in_bin) {
      r.word = m;
      first_in_bin = false;
    }
    if (test({&x_seq, &s_seq, &cb.t_words[m]})) {
      if (hits == 0) r.word = m;
      ++hits;
    }
  }
  r.ok = hits == 1;
  r.key_hat = cb.subbin_of[r.word];
  return r;
}

Round2Transcript Round2System::run_trial(const CodebookPair& cbs, Rng& rng) const {
  const std::size_t n = cfg_.n;
  Round2Transcript tr;
  tr.s_seq = sample_iid(rng, state_probs(), n);
  tr.t_seq.resize(n);
  tr.x1_seq.resize(n);
  tr.x2_seq.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    tr.t_seq[k] = static_cast<std::uint8_t>(rng.sample(degrade_row(tr.s_seq[k])));
    const std::size_t x = rng.sample(input_row(tr.s_seq[k]));
    tr.x1_seq[k] = static_cast<std::uint8_t>(x / nx2_);
    tr.x2_seq[k] = static_cast<std::uint8_t>(x % nx2_);
  }
  tr.y_seq.resize(n);
  tr.z_seq.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t yz = rng.sample(channel_row(tr.x1_seq[k], tr.x2_seq[k], tr.s_seq[k]));
    tr.y_seq[k] = static_cast<std::uint8_t>(yz / nz_);
    tr.z_seq[k] = static_cast<std::uint8_t>(yz % nz_);
  }
  for (int i = 1; i <= 2; ++i) tr.receiver[i - 1] = receiver_key_gen(i, cbs[i - 1], tr.y_seq, tr.t_seq, rng);
  for (int i = 1; i <= 2; ++i) {
    tr.transmitter[i - 1] = transmitter_reconstruct(i, i == 1 ? tr.x1_seq : tr.x2_seq, tr.s_seq,
                                                    tr.receiver[i - 1].psi, cbs[i - 1]);
  }
  return tr;
}

CodebookPair generate_t_codebooks(const SdMacSpec& spec, const Round2Scheme& scheme, const Round2Config& cfg,
                                  Rng& rng) {
  return Round2System(spec, scheme, cfg).generate_t_codebooks(rng);
}

CodebookPair round2_codebooks_for_batch(const Round2System& sys, std::size_t batch) {
  Rng rng(derive_seed(sys.config().seed, kCodebookStream, batch));
  return sys.generate_t_codebooks(rng);
}

namespace {

struct KeyMass {
  std::uint32_t psi;
  std::uint32_t key;
  double weight;
};

// Distribution of (psi, key) produced by the receiver on a given (y, t).
std::vector<KeyMass> choice_distribution(const Round2System& sys, int i, const DoubleBinnedCodebook& cb,
                                         const Sequence& y, const Sequence& t) {
  const auto cands = sys.receiver_candidates(i, cb, y, t);
  std::vector<std::pair<std::uint32_t, double>> words;
  if (cands.empty()) {
    words.emplace_back(0, 1.0);
  } else if (sys.config().tie_break == TieBreak::lowest_index) {
    words.emplace_back(cands.front(), 1.0);
  } else {
    const double w = 1.0 / static_cast<double>(cands.size());
    for (auto m : cands) words.emplace_back(m, w);
  }
  std::vector<KeyMass> out;
  for (const auto& [m, w] : words) {
    const std::uint32_t psi = cb.bin_of[m];
    const std::uint32_t key = cb.subbin_of[m];
    bool merged = false;
    for (auto& e : out) {
      if (e.psi == psi && e.key == key) {
        e.weight += w;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back({psi, key, w});
  }
  return out;
}

}  // namespace

Round2Exact exact_round2_metrics(const Round2System& sys, const CodebookPair& cbs, std::uint64_t budget) {
  using namespace var;
  const SdMacSpec& spec = sys.spec();
  const JointPmf& j = sys.joint();
  const std::size_t n = sys.n();
  const std::size_t ns = spec.s().alphabet.size();
  const std::size_t nt = spec.t().alphabet.size();
  const std::size_t nz = spec.z().alphabet.size();
  const std::size_t nr = spec.y().alphabet.size() * nt;
  const std::array<std::size_t, 2> nx{spec.x1().alphabet.size(), spec.x2().alphabet.size()};

  const std::uint64_t n_r = checked_power(nr, n, budget, "receiver observations");
  const std::uint64_t n_z = checked_power(nz, n, budget, "eavesdropper sequences");
  std::array<std::uint64_t, 2> n_w{};
  for (int i = 0; i < 2; ++i) {
    n_w[i] = checked_power(nx[i] * ns, n, budget, "transmitter observations");
    if (n_r > budget / n_w[i]) {
      throw BudgetExceeded("exact round-2 enumeration of " + std::to_string(static_cast<double>(n_r) * n_w[i]) +
                           " leaves exceeds the budget of " + std::to_string(budget) + "; use Monte-Carlo instead");
    }
  }
  const std::size_t b1 = cbs[0].bins, b2 = cbs[1].bins;
  const std::array<std::size_t, 2> kk{cbs[0].subbins, cbs[1].subbins};
  const std::uint64_t eve_cols = n_z * b1 * b2;
  if (eve_cols > budget / std::max(kk[0], kk[1])) throw BudgetExceeded("eavesdropper table exceeds the budget");

  // Per-symbol laws, with r = y * |T| + t.
  const std::vector<double> p_r = j.marginal({Y, T}).table();
  const ConditionalPmf z_given_r = conditional(j, {Z}, {Y, T});
  std::array<ConditionalPmf, 2> own_given_r{conditional(j, {X1, S}, {Y, T}), conditional(j, {X2, S}, {Y, T})};
  std::array<JointPmf, 2> other_marg{j.marginal({X2, S}), j.marginal({X1, S})};
  std::array<ConditionalPmf, 2> r_given_other{conditional(j, {Y, T}, {X2, S}), conditional(j, {Y, T}, {X1, S})};

  // Receiver choice distributions for every r^n.
  std::array<std::vector<std::vector<KeyMass>>, 2> choice;
  choice[0].resize(n_r);
  choice[1].resize(n_r);
  std::vector<double> prob_r(n_r, 0.0);
  for_each_sequence(p_r, n, [&](const Sequence& r, double p) {
    const std::uint64_t ri = sequence_index(r, nr);
    prob_r[ri] = p;
    Sequence y(n), t(n);
    for (std::size_t k = 0; k < n; ++k) {
      y[k] = static_cast<std::uint8_t>(r[k] / nt);
      t[k] = static_cast<std::uint8_t>(r[k] % nt);
    }
    for (int i = 0; i < 2; ++i) choice[i][ri] = choice_distribution(sys, i + 1, cbs[i], y, t);
  });

  Round2Exact out;

  // Eavesdropper tables E_i[k_i][(z, psi1, psi2)] and the key pair law.
  std::array<std::vector<double>, 2> eve{std::vector<double>(kk[0] * eve_cols, 0.0),
                                         std::vector<double>(kk[1] * eve_cols, 0.0)};
  std::vector<double> keys(kk[0] * kk[1], 0.0);
  for (std::uint64_t ri = 0; ri < n_r; ++ri) {
    if (prob_r[ri] == 0.0) continue;
    const Sequence r = sequence_from_index(ri, nr, n);
    for (const auto& a : choice[0][ri]) {
      for (const auto& b : choice[1][ri]) keys[a.key * kk[1] + b.key] += prob_r[ri] * a.weight * b.weight;
    }
    for_each_product(
        n, [&](std::size_t k) { return z_given_r.row(r[k]); },
        [&](const Sequence& z, double pz) {
          const std::uint64_t zi = sequence_index(z, nz);
          const double base = prob_r[ri] * pz;
          for (const auto& a : choice[0][ri]) {
            for (const auto& b : choice[1][ri]) {
              const double m = base * a.weight * b.weight;
              const std::uint64_t col = (zi * b1 + a.psi) * b2 + b.psi;
              eve[0][a.key * eve_cols + col] += m;
              eve[1][b.key * eve_cols + col] += m;
            }
          }
        });
  }
  out.key_coupling = table_mutual_information(keys, kk[0], kk[1]) / static_cast<double>(n);

  std::array<std::vector<double>, 2> p_key;
  for (int i = 0; i < 2; ++i) {
    p_key[i].assign(kk[i], 0.0);
    for (std::size_t k = 0; k < kk[i]; ++k) {
      for (std::uint64_t c = 0; c < eve_cols; ++c) p_key[i][k] += eve[i][k * eve_cols + c];
    }
    out.key_entropy[i] = table_entropy(p_key[i]);
    out.log2_subbins[i] = std::log2(static_cast<double>(kk[i]));
    out.leak_eve[i] = table_mutual_information(eve[i], kk[i], eve_cols) / static_cast<double>(n);
  }

  for (int i = 0; i < 2; ++i) {
    const int ic = 1 - i;
    const std::size_t nw = nx[i] * ns;
    const auto& cb = cbs[i];

    // Transmitter decisions for every (x_i, s)^n and announced bin.
    std::vector<std::uint32_t> k_hat(n_w[i] * cb.bins);
    for (std::uint64_t wi = 0; wi < n_w[i]; ++wi) {
      const Sequence w = sequence_from_index(wi, nw, n);
      Sequence x(n), s(n);
      for (std::size_t k = 0; k < n; ++k) {
        x[k] = static_cast<std::uint8_t>(w[k] / ns);
        s[k] = static_cast<std::uint8_t>(w[k] % ns);
      }
      for (std::uint32_t b = 0; b < cb.bins; ++b) {
        k_hat[wi * cb.bins + b] = sys.transmitter_reconstruct(i + 1, x, s, b, cb).key_hat;
      }
    }
    double err = 0.0;
    for (std::uint64_t ri = 0; ri < n_r; ++ri) {
      if (prob_r[ri] == 0.0) continue;
      const Sequence r = sequence_from_index(ri, nr, n);
      const auto& ch = choice[i][ri];
      for_each_product(
          n, [&](std::size_t k) { return own_given_r[i].row(r[k]); },
          [&](const Sequence& w, double pw) {
            const std::uint64_t wi = sequence_index(w, nw);
            double miss = 0.0;
            for (const auto& a : ch) {
              if (k_hat[wi * cb.bins + a.psi] != a.key) miss += a.weight;
            }
            err += prob_r[ri] * pw * miss;
          });
    }
    out.p_err[i] = err;

    // Cross leakage, accumulated one (x_ic, s)^n at a time:
    // sum p(w,k,q) log p(w,k,q) / (p(k) p(w,q)) with q = (k_ic, psi1, psi2).
    const std::size_t q_size = kk[ic] * b1 * b2;
    std::vector<double> local(kk[i] * q_size);
    std::vector<double> col(q_size);
    double total = 0.0;
    for (double p : p_key[i]) total += p;
    double leak = 0.0;
    for_each_sequence(other_marg[i].table(), n, [&](const Sequence& w, double pw) {
      std::fill(local.begin(), local.end(), 0.0);
      for_each_product(
          n, [&](std::size_t k) { return r_given_other[i].row(w[k]); },
          [&](const Sequence& r, double pr) {
            const std::uint64_t ri = sequence_index(r, nr);
            const double base = pw * pr;
            for (const auto& a : choice[i][ri]) {
              for (const auto& b : choice[ic][ri]) {
                const std::uint32_t psi1 = i == 0 ? a.psi : b.psi;
                const std::uint32_t psi2 = i == 0 ? b.psi : a.psi;
                const std::size_t q = (b.key * b1 + psi1) * b2 + psi2;
                local[a.key * q_size + q] += base * a.weight * b.weight;
              }
            }
          });
      std::fill(col.begin(), col.end(), 0.0);
      for (std::size_t k = 0; k < kk[i]; ++k) {
        for (std::size_t q = 0; q < q_size; ++q) col[q] += local[k * q_size + q];
      }
      for (std::size_t k = 0; k < kk[i]; ++k) {
        for (std::size_t q = 0; q < q_size; ++q) {
          const double m = local[k * q_size + q];
          if (m > 0.0) leak += m * std::log2((m * total) / (p_key[i][k] * col[q]));
        }
      }
    });
    out.leak_cross[i] = std::max(0.0, leak / total) / static_cast<double>(n);
  }
  return out;
}

namespace {

struct Trial2 {
  std::array<bool, 2> agree{};
  std::array<bool, 2> ok{};
  std::array<bool, 2> found{};
  std::array<std::uint32_t, 2> key{};
};

}  // namespace

SimulationReport monte_carlo_round2(const Round2System& sys, const McOptions& opts) {
  if (opts.trials < 1) throw ValidationError("trials must be >= 1");
  const Round2Config& cfg = sys.config();
  std::vector<Trial2> results(opts.trials);
  auto run = [&](const CodebookPair& cbs, std::size_t t) {
    Rng rng(derive_seed(cfg.seed, kTrialStream, t));
    const Round2Transcript tr = sys.run_trial(cbs, rng);
    Trial2 o;
    for (int i = 0; i < 2; ++i) {
      o.agree[i] = tr.transmitter[i].key_hat == tr.receiver[i].key;
      o.ok[i] = tr.transmitter[i].ok;
      o.found[i] = tr.receiver[i].found;
      o.key[i] = tr.receiver[i].key;
    }
    results[t] = o;
  };
  std::array<std::size_t, 2> subbins{};
  if (opts.codebook_batch == 0) {
    const CodebookPair cbs = round2_codebooks_for_batch(sys, 0);
    subbins = {cbs[0].subbins, cbs[1].subbins};
    parallel_for(opts.trials, opts.threads, [&](std::size_t t) { run(cbs, t); });
  } else {
    const CodebookPair probe = round2_codebooks_for_batch(sys, 0);
    subbins = {probe[0].subbins, probe[1].subbins};
    const std::size_t batches = (opts.trials + opts.codebook_batch - 1) / opts.codebook_batch;
    parallel_for(batches, opts.threads, [&](std::size_t b) {
      const CodebookPair cbs = b == 0 ? probe : round2_codebooks_for_batch(sys, b);
      const std::size_t end = std::min(opts.trials, (b + 1) * opts.codebook_batch);
      for (std::size_t t = b * opts.codebook_batch; t < end; ++t) run(cbs, t);
    });
  }

  SimulationReport rep;
  rep.seed = cfg.seed;
  rep.echo("task", "sim-round2");
  rep.echo("n", std::to_string(cfg.n));
  for (int i = 0; i < 2; ++i) {
    const std::string s = std::to_string(i + 1);
    rep.echo("rate_t" + s, format_number(cfg.rate_t[i]));
    rep.echo("rate_bins" + s, format_number(cfg.rate_bins[i]));
    rep.echo("rate_subbins" + s, format_number(cfg.rate_subbins[i]));
  }
  rep.echo("eps", format_number(cfg.eps));
  rep.echo("tie_break", cfg.tie_break == TieBreak::uniform ? "uniform" : "lowest");
  rep.echo("trials", std::to_string(opts.trials));
  rep.echo("codebook_batch", std::to_string(opts.codebook_batch));
  for (int i = 0; i < 2; ++i) {
    const std::string s = std::to_string(i + 1);
    std::size_t agree = 0, ok = 0, found = 0;
    std::vector<double> hist(subbins[i], 0.0);
    for (const auto& r : results) {
      agree += r.agree[i];
      ok += r.ok[i];
      found += r.found[i];
      hist[r.key[i]] += 1.0;
    }
    rep.add_proportion("key_agreement" + s, agree, opts.trials);
    rep.add_proportion("reconstruction_ok" + s, ok, opts.trials);
    rep.add_proportion("receiver_found" + s, found, opts.trials);
    rep.add_estimate("key_entropy" + s, table_entropy(hist), opts.trials);
    rep.add_exact("log2_subbins" + s, std::log2(static_cast<double>(subbins[i])));
    rep.add_exact("covering_threshold" + s, sys.covering_threshold(i + 1));
    rep.add_exact("packing_threshold" + s, sys.packing_threshold(i + 1));
  }
  return rep;
}

}  // namespace sdkey

#include "sdkey/round1.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

#include "sdkey/error.hpp"
#include "sdkey/parallel.hpp"

namespace sdkey {

namespace {

constexpr std::uint64_t kCodebookStream = 0xC0DEB00CULL;
constexpr std::uint64_t kTrialStream = 0x7121A15ULL;

std::vector<std::size_t> deterministic_map(const ConditionalPmf& k, const char* what) {
  if (!k.is_deterministic()) {
    throw ValidationError(std::string(what) + " must be deterministic for the protocol (0/1 rows)");
  }
  std::vector<std::size_t> m(k.given_count());
  for (std::size_t g = 0; g < m.size(); ++g) m[g] = k.argmax(g);
  return m;
}

void check_symbols(const Variable& v) {
  if (v.alphabet.size() > kMaxSymbols) {
    throw ValidationError("alphabet of " + v.name + " is too large for sequence simulation");
  }
}

}  // namespace

void Round1Config::validate() const {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!(rate_u >= 0.0)) throw ValidationError("rate_u must be nonnegative");
  if (!(rate_v_bins >= 0.0)) throw ValidationError("rate_v_bins must be nonnegative");
  if (!(rate_v_bins <= rate_v_total)) throw ValidationError("rate_v_bins must not exceed rate_v_total");
  if (!(r_c >= 0.0)) throw ValidationError("r_c must be nonnegative");
  if (!(eps >= 0.0)) throw ValidationError("typicality eps must be nonnegative");
}

Round1System::Round1System(SdMacSpec spec, AuxiliaryScheme aux, Round1Config cfg)
    : spec_(std::move(spec)),
      aux_(std::move(aux)),
      cfg_(cfg),
      enc_su_(JointPmf::uniform({spec_.s()}), 0.0),
      enc_suv_(enc_su_),
      dec_tyu_(enc_su_),
      dec_tyuv_(enc_su_) {
  cfg_.validate();
  aux_.check_compatible(spec_);
  for (const auto& v : {spec_.s(), spec_.t(), spec_.x1(), spec_.x2(), spec_.y(), spec_.z(), aux_.u(), aux_.v()}) {
    check_symbols(v);
  }
  ns_ = spec_.s().alphabet.size();
  nt_ = spec_.t().alphabet.size();
  nu_ = aux_.u().alphabet.size();
  nv_ = aux_.v().alphabet.size();
  nx1_ = spec_.x1().alphabet.size();
  nx2_ = spec_.x2().alphabet.size();
  ny_ = spec_.y().alphabet.size();
  nz_ = spec_.z().alphabet.size();
  x1_map_ = deterministic_map(aux_.x1_kernel(), "x1_kernel");
  x2_map_ = deterministic_map(aux_.x2_kernel(), "x2_kernel");

  const JointPmf j = reduced_joint_round1(spec_, aux_);
  using namespace var;
  enc_su_ = TypicalityTest(j.marginal({S, U}), cfg_.eps);
  enc_suv_ = TypicalityTest(j.marginal({S, U, V}), cfg_.eps);
  dec_tyu_ = TypicalityTest(j.marginal({T, Y, U}), cfg_.eps);
  dec_tyuv_ = TypicalityTest(j.marginal({T, Y, U, V}), cfg_.eps);
  u_marginal_ = j.marginal({U}).table();
  v_given_u_ = conditional(j, {V}, {U}).rows();
  const auto lik = conditional(j, {Y, T}, {U, V}).rows();
  log_lik_.resize(lik.size());
  for (std::size_t i = 0; i < lik.size(); ++i) {
    log_lik_[i] = lik[i] > 0.0 ? std::log2(lik[i]) : -std::numeric_limits<double>::infinity();
  }
  h_uv_s_ = conditional_entropy(j, {U, V}, {S});
}

std::span<const double> Round1System::channel_row(std::size_t x1, std::size_t x2, std::size_t s) const {
  return spec_.channel_kernel().row((x1 * nx2_ + x2) * ns_ + s);
}

SuperpositionCodebook Round1System::generate_codebook(Rng& rng) const {
  const std::size_t n = cfg_.n;
  const std::size_t mu = codebook_size(n, cfg_.rate_u, cfg_.max_words, "rate_u");
  const std::size_t mv = codebook_size(n, cfg_.rate_v_total, cfg_.max_words, "rate_v_total");
  const std::size_t bins = codebook_size(n, cfg_.rate_v_bins, cfg_.max_words, "rate_v_bins");
  if (mu * mv > cfg_.max_words) {
    throw ValidationError("codebook of " + std::to_string(mu) + " x " + std::to_string(mv) +
                          " words exceeds max_words = " + std::to_string(cfg_.max_words) + " (needs about " +
                          std::to_string(static_cast<double>(mu * mv * n) / 1048576.0) + " MiB)");
  }
  SuperpositionCodebook cb;
  cb.bins = bins;
  cb.u_words.reserve(mu);
  for (std::size_t m = 0; m < mu; ++m) cb.u_words.push_back(sample_iid(rng, u_marginal_, n));
  cb.v_words.resize(mu);
  cb.bin_of.resize(mu);
  for (std::size_t m = 0; m < mu; ++m) {
    const Sequence& u = cb.u_words[m];
    auto& list = cb.v_words[m];
    list.reserve(mv);
    for (std::size_t k = 0; k < mv; ++k) {
      Sequence v(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = static_cast<std::uint8_t>(rng.sample(std::span<const double>(v_given_u_.data() + u[i] * nv_, nv_)));
      }
      list.push_back(std::move(v));
    }
    cb.bin_of[m] = balanced_partition(rng, mv, bins);
  }
  return cb;
}

std::vector<IndexPair> Round1System::encoder_candidates(const SuperpositionCodebook& cb,
                                                        const Sequence& s_seq) const {
  std::vector<IndexPair> out;
  for (std::uint32_t mu = 0; mu < cb.m_u(); ++mu) {
    const Sequence& u = cb.u_words[mu];
    if (!enc_su_({&s_seq, &u})) continue;
    for (std::uint32_t mv = 0; mv < cb.v_words[mu].size(); ++mv) {
      if (enc_suv_({&s_seq, &u, &cb.v_words[mu][mv]})) out.emplace_back(mu, mv);
    }
  }
  return out;
}

std::pair<IndexPair, bool> Round1System::encode_conference(const SuperpositionCodebook& cb, const Sequence& s_seq,
                                                           Rng& rng) const {
  const auto cands = encoder_candidates(cb, s_seq);
  if (cands.empty()) return {{0, 0}, false};
  if (cfg_.tie_break == TieBreak::lowest_index) return {cands.front(), true};
  return {cands[rng.index(cands.size())], true};
}

double Round1System::conferencing_budget(const SuperpositionCodebook& cb, const Sequence& s_seq) const {
  std::size_t centers = 0;
  std::size_t widest = 0;
  for (std::uint32_t mu = 0; mu < cb.m_u(); ++mu) {
    const Sequence& u = cb.u_words[mu];
    if (!enc_su_({&s_seq, &u})) continue;
    ++centers;
    std::size_t sat = 0;
    for (const auto& v : cb.v_words[mu]) sat += enc_suv_({&s_seq, &u, &v}) ? 1 : 0;
    widest = std::max(widest, sat);
  }
  const double count = static_cast<double>(centers) * static_cast<double>(widest);
  return count > 1.0 ? std::log2(count) : 0.0;
}

double Round1System::asymptotic_budget() const { return h_uv_s_; }

Sequence Round1System::input_sequence(int j, const SuperpositionCodebook& cb, IndexPair idx,
                                      const Sequence& s_seq) const {
  const auto& map = j == 1 ? x1_map_ : x2_map_;
  const Sequence& u = cb.u_words[idx.first];
  const Sequence& v = cb.v_words[idx.first][idx.second];
  Sequence x(s_seq.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = static_cast<std::uint8_t>(map[(u[i] * nv_ + v[i]) * ns_ + s_seq[i]]);
  }
  return x;
}

std::pair<Sequence, Sequence> Round1System::channel_transmit(const Sequence& x1, const Sequence& x2,
                                                             const Sequence& s, Rng& rng) const {
  if (x1.size() != s.size() || x2.size() != s.size()) throw ValidationError("channel_transmit: length mismatch");
  Sequence y(s.size()), z(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t yz = rng.sample(channel_row(x1[i], x2[i], s[i]));
    y[i] = static_cast<std::uint8_t>(yz / nz_);
    z[i] = static_cast<std::uint8_t>(yz % nz_);
  }
  return {std::move(y), std::move(z)};
}

DecodeResult Round1System::decode_common_key(const SuperpositionCodebook& cb, const Sequence& y_seq,
                                             const Sequence& t_seq) const {
  DecodeResult r;
  if (cfg_.decoder == Decoder::max_likelihood) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint32_t mu = 0; mu < cb.m_u(); ++mu) {
      const Sequence& u = cb.u_words[mu];
      for (std::uint32_t mv = 0; mv < cb.v_words[mu].size(); ++mv) {
        const Sequence& v = cb.v_words[mu][mv];
        double score = 0.0;
        for (std::size_t i = 0; i < y_seq.size() && score > best; ++i) {
          score += log_lik_[((u[i] * nv_ + v[i]) * ny_ + y_seq[i]) * nt_ + t_seq[i]];
        }
        if (score > best) {
          best = score;
          r.indices = {mu, mv};
          r.ok = true;
        }
      }
    }
  } else {
    std::uint32_t found_u = 0;
    std::size_t count_u = 0;
    for (std::uint32_t mu = 0; mu < cb.m_u(); ++mu) {
      if (dec_tyu_({&t_seq, &y_seq, &cb.u_words[mu]})) {
        found_u = mu;
        ++count_u;
      }
    }
    if (count_u == 1) {
      const Sequence& u = cb.u_words[found_u];
      std::uint32_t found_v = 0;
      std::size_t count_v = 0;
      for (std::uint32_t mv = 0; mv < cb.v_words[found_u].size(); ++mv) {
        if (dec_tyuv_({&t_seq, &y_seq, &u, &cb.v_words[found_u][mv]})) {
          found_v = mv;
          ++count_v;
        }
      }
      if (count_v == 1) {
        r.indices = {found_u, found_v};
        r.ok = true;
      }
    }
  }
  r.k0_hat = cb.bin_of[r.indices.first][r.indices.second];
  return r;
}

Round1Transcript Round1System::run_trial(const SuperpositionCodebook& cb, Rng& rng) const {
  const std::size_t n = cfg_.n;
  Round1Transcript tr;
  tr.s_seq = sample_iid(rng, state_probs(), n);
  tr.t_seq.resize(n);
  for (std::size_t i = 0; i < n; ++i) tr.t_seq[i] = static_cast<std::uint8_t>(rng.sample(degrade_row(tr.s_seq[i])));
  const auto [idx, found] = encode_conference(cb, tr.s_seq, rng);
  tr.chosen = idx;
  tr.encoder_found = found;
  tr.conference_bits_used = conferencing_budget(cb, tr.s_seq);
  tr.conference_ok = tr.conference_bits_used <= static_cast<double>(n) * cfg_.r_c + 1e-9;
  tr.chosen_enc2 = tr.conference_ok ? idx : IndexPair{0, 0};
  tr.x1_seq = input_sequence(1, cb, tr.chosen, tr.s_seq);
  tr.x2_seq = input_sequence(2, cb, tr.chosen_enc2, tr.s_seq);
  auto [y, z] = channel_transmit(tr.x1_seq, tr.x2_seq, tr.s_seq, rng);
  tr.y_seq = std::move(y);
  tr.z_seq = std::move(z);
  tr.k0 = cb.bin_of[tr.chosen.first][tr.chosen.second];
  tr.k02 = cb.bin_of[tr.chosen_enc2.first][tr.chosen_enc2.second];
  const DecodeResult d = decode_common_key(cb, tr.y_seq, tr.t_seq);
  tr.k0_hat = d.k0_hat;
  tr.decode_ok = d.ok;
  return tr;
}

SuperpositionCodebook generate_codebook(const SdMacSpec& spec, const AuxiliaryScheme& aux, const Round1Config& cfg,
                                        Rng& rng) {
  return Round1System(spec, aux, cfg).generate_codebook(rng);
}

Round1Exact exact_round1_metrics(const Round1System& sys, const SuperpositionCodebook& cb, std::uint64_t budget) {
  const SdMacSpec& spec = sys.spec();
  const std::size_t n = sys.n();
  const std::size_t nt = spec.t().alphabet.size();
  const std::size_t ny = spec.y().alphabet.size();
  const std::size_t nz = spec.z().alphabet.size();

  std::size_t s_support = 0;
  for (double p : sys.state_probs()) s_support += p > 0.0 ? 1 : 0;
  const std::uint64_t n_s = checked_power(s_support, n, budget, "state sequences");
  const std::uint64_t n_t = checked_power(nt, n, budget, "degraded-state sequences");
  const std::uint64_t n_y = checked_power(ny, n, budget, "output sequences");
  const std::uint64_t n_z = checked_power(nz, n, budget, "eavesdropper sequences");
  const std::uint64_t n_yz = checked_power(ny * nz, n, budget, "output pairs");
  if (n_s > budget / n_t || n_s * n_t > budget / n_yz) {
    throw BudgetExceeded("exact round-1 enumeration of " + std::to_string(static_cast<double>(n_s) * n_t * n_yz) +
                         " leaves exceeds the budget of " + std::to_string(budget) + "; use Monte-Carlo instead");
  }
  const std::size_t nx1 = spec.x1().alphabet.size();
  const std::size_t nx2 = spec.x2().alphabet.size();

  // Decoder output for every (y^n, t^n).
  std::vector<std::uint32_t> k_hat(n_y * n_t);
  for (std::uint64_t yi = 0; yi < n_y; ++yi) {
    const Sequence y = sequence_from_index(yi, ny, n);
    for (std::uint64_t ti = 0; ti < n_t; ++ti) {
      k_hat[yi * n_t + ti] = sys.decode_common_key(cb, y, sequence_from_index(ti, nt, n)).k0_hat;
    }
  }

  Round1Exact out;
  const std::size_t bins = cb.bins;
  out.log2_bins = std::log2(static_cast<double>(bins));
  std::vector<double> joint_kz(bins * n_z, 0.0);
  const double conf_limit = static_cast<double>(n) * sys.config().r_c + 1e-9;

  for_each_sequence(sys.state_probs(), n, [&](const Sequence& s, double ps) {
    const auto cands = sys.encoder_candidates(cb, s);
    std::vector<std::pair<IndexPair, double>> choices;
    if (cands.empty()) {
      choices.emplace_back(IndexPair{0, 0}, 1.0);
      out.encoder_failure += ps;
    } else if (sys.config().tie_break == TieBreak::lowest_index) {
      choices.emplace_back(cands.front(), 1.0);
    } else {
      const double w = 1.0 / static_cast<double>(cands.size());
      for (const auto& c : cands) choices.emplace_back(c, w);
    }
    const bool conf_ok = sys.conferencing_budget(cb, s) <= conf_limit;
    if (!conf_ok) out.conference_failure += ps;

    // Choices that produce the same inputs and key are merged.
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint32_t>, std::pair<double, std::pair<Sequence, Sequence>>>
        groups;
    for (const auto& [idx, w] : choices) {
      Sequence x1 = sys.input_sequence(1, cb, idx, s);
      Sequence x2 = sys.input_sequence(2, cb, conf_ok ? idx : IndexPair{0, 0}, s);
      const auto key = std::make_tuple(sequence_index(x1, nx1), sequence_index(x2, nx2),
                                       cb.bin_of[idx.first][idx.second]);
      auto& g = groups[key];
      g.first += w;
      g.second = {std::move(x1), std::move(x2)};
    }

    for_each_product(
        n, [&](std::size_t i) { return sys.degrade_row(s[i]); },
        [&](const Sequence& t, double pt) {
          const std::uint64_t ti = sequence_index(t, nt);
          for (const auto& [key, g] : groups) {
            const std::uint32_t k = std::get<2>(key);
            const double base = ps * pt * g.first;
            const Sequence& x1 = g.second.first;
            const Sequence& x2 = g.second.second;
            for_each_product(
                n, [&](std::size_t i) { return sys.channel_row(x1[i], x2[i], s[i]); },
                [&](const Sequence& yz, double pyz) {
                  std::uint64_t yi = 0, zi = 0;
                  for (std::size_t i = 0; i < n; ++i) {
                    yi = yi * ny + yz[i] / nz;
                    zi = zi * nz + yz[i] % nz;
                  }
                  const double mass = base * pyz;
                  if (k_hat[yi * n_t + ti] != k) out.p_err += mass;
                  joint_kz[k * n_z + zi] += mass;
                });
          }
        });
  });

  std::vector<double> pk(bins, 0.0);
  for (std::size_t k = 0; k < bins; ++k) {
    for (std::uint64_t z = 0; z < n_z; ++z) pk[k] += joint_kz[k * n_z + z];
  }
  out.key_entropy = table_entropy(pk);
  out.leakage_per_symbol = table_mutual_information(joint_kz, bins, n_z) / static_cast<double>(n);
  return out;
}

SuperpositionCodebook round1_codebook_for_batch(const Round1System& sys, std::size_t batch) {
  Rng rng(derive_seed(sys.config().seed, kCodebookStream, batch));
  return sys.generate_codebook(rng);
}

namespace {

struct TrialOutcome {
  bool error = false;
  bool decode_fail = false;
  bool encoder_fail = false;
  bool conference_fail = false;
  bool disagreement = false;
  double bits = 0.0;
  std::uint32_t key = 0;
};

TrialOutcome summarize(const Round1Transcript& tr) {
  TrialOutcome o;
  o.error = tr.k0_hat != tr.k0;
  o.decode_fail = !tr.decode_ok;
  o.encoder_fail = !tr.encoder_found;
  o.conference_fail = !tr.conference_ok;
  o.disagreement = tr.k0 != tr.k02;
  o.bits = tr.conference_bits_used;
  o.key = tr.k0;
  return o;
}

const char* decoder_name(Decoder d) { return d == Decoder::typicality ? "typicality" : "ml"; }
const char* tie_name(TieBreak t) { return t == TieBreak::uniform ? "uniform" : "lowest"; }

}  // namespace

SimulationReport monte_carlo_round1(const Round1System& sys, const McOptions& opts) {
  if (opts.trials < 1) throw ValidationError("trials must be >= 1");
  const Round1Config& cfg = sys.config();
  std::vector<TrialOutcome> results(opts.trials);
  auto trial_rng = [&](std::size_t t) { return Rng(derive_seed(cfg.seed, kTrialStream, t)); };
  std::size_t bins = 1;
  if (opts.codebook_batch == 0) {
    const SuperpositionCodebook cb = round1_codebook_for_batch(sys, 0);
    bins = cb.bins;
    parallel_for(opts.trials, opts.threads, [&](std::size_t t) {
      Rng rng = trial_rng(t);
      results[t] = summarize(sys.run_trial(cb, rng));
    });
  } else {
    const std::size_t batches = (opts.trials + opts.codebook_batch - 1) / opts.codebook_batch;
    bins = codebook_size(cfg.n, cfg.rate_v_bins, cfg.max_words, "rate_v_bins");
    parallel_for(batches, opts.threads, [&](std::size_t b) {
      const SuperpositionCodebook cb = round1_codebook_for_batch(sys, b);
      const std::size_t end = std::min(opts.trials, (b + 1) * opts.codebook_batch);
      for (std::size_t t = b * opts.codebook_batch; t < end; ++t) {
        Rng rng = trial_rng(t);
        results[t] = summarize(sys.run_trial(cb, rng));
      }
    });
  }

  std::size_t err = 0, dec = 0, enc = 0, conf = 0, dis = 0;
  double bits = 0.0;
  std::vector<double> hist(bins, 0.0);
  for (const auto& r : results) {
    err += r.error;
    dec += r.decode_fail;
    enc += r.encoder_fail;
    conf += r.conference_fail;
    dis += r.disagreement;
    bits += r.bits;
    hist[r.key] += 1.0;
  }
  SimulationReport rep;
  rep.seed = cfg.seed;
  rep.echo("task", "sim-round1");
  rep.echo("n", std::to_string(cfg.n));
  rep.echo("rate_u", format_number(cfg.rate_u));
  rep.echo("rate_v_total", format_number(cfg.rate_v_total));
  rep.echo("rate_v_bins", format_number(cfg.rate_v_bins));
  rep.echo("r_c", format_number(cfg.r_c));
  rep.echo("eps", format_number(cfg.eps));
  rep.echo("decoder", decoder_name(cfg.decoder));
  rep.echo("tie_break", tie_name(cfg.tie_break));
  rep.echo("trials", std::to_string(opts.trials));
  rep.echo("codebook_batch", std::to_string(opts.codebook_batch));
  rep.add_proportion("p_err", err, opts.trials);
  rep.add_proportion("decode_failure", dec, opts.trials);
  rep.add_proportion("encoder_failure", enc, opts.trials);
  rep.add_proportion("conference_failure", conf, opts.trials);
  rep.add_proportion("key_disagreement", dis, opts.trials);
  rep.add_estimate("key_entropy", table_entropy(hist), opts.trials);
  rep.add_exact("log2_bins", std::log2(static_cast<double>(bins)));
  rep.add_estimate("conference_bits_mean", bits / static_cast<double>(opts.trials), opts.trials);
  rep.add_exact("conference_rate_sufficient", sys.asymptotic_budget());
  return rep;
}

}  // namespace sdkey

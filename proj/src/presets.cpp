#include "sdkey/presets.hpp"

#include "sdkey/probability.hpp"

namespace sdkey {

namespace {

Round1Setup modadd_setup(std::size_t n, double rate_v_total, double rate_v_bins, double eps) {
  SdMacSpec spec = build_modulo_additive(0.0, 0.1, 0.3);
  AuxiliaryScheme aux = single_input_scheme(spec, 0.5);
  Round1Config cfg;
  cfg.n = n;
  cfg.rate_v_total = rate_v_total;
  cfg.rate_v_bins = rate_v_bins;
  cfg.r_c = 5.0;
  cfg.eps = eps;
  cfg.decoder = Decoder::max_likelihood;
  cfg.seed = 1;
  return {std::move(spec), std::move(aux), cfg};
}

Round2Setup parallel_setup(std::size_t n, double rate_t, double rate_bins, double rate_subbins) {
  SdMacSpec spec = build_parallel_bsc(0.0, 0.01, 0.01, 0.1);
  Round2Scheme scheme = parallel_test_channel_scheme(spec, 0.03, 0.03, 0.15);
  Round2Config cfg;
  cfg.n = n;
  cfg.rate_t = {rate_t, rate_t};
  cfg.rate_bins = {rate_bins, rate_bins};
  cfg.rate_subbins = {rate_subbins, rate_subbins};
  cfg.eps = 0.12;
  cfg.seed = 1;
  return {std::move(spec), std::move(scheme), cfg};
}

}  // namespace

Round1Setup round1_reference(std::size_t n) {
  const double secrecy = binary_entropy(0.3) - binary_entropy(0.1);
  const double decoding = 1.0 - binary_entropy(0.1);
  return modadd_setup(n, 0.6 * decoding, 0.6 * secrecy, 0.5);
}

Round1Setup round1_leakage_trend(std::size_t n) { return modadd_setup(n, 1.0, 0.3, 0.5); }

Round1Setup round1_error_trend(std::size_t n) { return modadd_setup(n, 0.26, 0.25, 0.5); }

Round2Setup round2_reference() { return parallel_setup(10, 0.58, 0.48, 0.1); }

Round2Setup round2_exact_reference() { return parallel_setup(6, 0.67, 0.45, 0.2); }

}  // namespace sdkey

#pragma once

#include <cstddef>

#include "sdkey/channel.hpp"
#include "sdkey/round1.hpp"
#include "sdkey/round2.hpp"

namespace sdkey {

// Reference configurations shared by the acceptance suite, the tests and the
// CLI `--preset` option. All use small binary channels so that exact
// enumeration stays cheap at n <= 8.

struct Round1Setup {
  SdMacSpec spec;
  AuxiliaryScheme aux;
  Round1Config cfg;
};

struct Round2Setup {
  SdMacSpec spec;
  Round2Scheme scheme;
  Round2Config cfg;
};

/// Modulo-additive(0, 0.1, 0.3) with X1 = V ~ Bern(1/2), X2 fixed. Bin rate is
/// 60% of I(V;Y) - I(V;Z), list rate 60% of I(V;Y); ML decoding.
Round1Setup round1_reference(std::size_t n);
/// Same channel with a long satellite list (rate 1) and bin rate 0.3, used for
/// the leakage-versus-n trend.
Round1Setup round1_leakage_trend(std::size_t n);
/// Same channel at list rate 0.26 and bin rate 0.25, used for the
/// error-versus-n trend with a fresh codebook per trial.
Round1Setup round1_error_trend(std::size_t n);

/// Parallel BSC (p_s = 0, p1 = p2 = 0.01, eavesdropper sees X1^X2 through
/// BSC(0.1)) with Bern(0.15) inputs and T_i = Y_i ^ Bern(0.03). At n = 10:
/// 55 words, 27 bins, 2 sub-bins per transmitter.
Round2Setup round2_reference();
/// The same law at n = 6 with 16 words, 6 bins, 2 sub-bins; sized for exact
/// enumeration.
Round2Setup round2_exact_reference();

}  // namespace sdkey

#pragma once

#include <iosfwd>
#include <string>

#include "sdkey/channel.hpp"

namespace sdkey {

// Channel-spec file (format = 1):
//
//   format = 1
//   [alphabets]        S = ..., T = ..., X1 = ..., X2 = ..., Y = ..., Z = ...
//   [state_pmf]        one row of |S| probabilities
//   [degrade_kernel]   "<s> : p(t|s)..." one row per state symbol
//   [channel_kernel]   "<x1> <x2> <s> : p(y,z|x1,x2,s)..." with Z varying fastest
//
// Probabilities are decimal literals written with the shortest round-trip
// representation, so save followed by load reproduces every table value.

SdMacSpec read_spec(std::istream& in, const std::string& source = "<stream>");
void write_spec(std::ostream& os, const SdMacSpec& spec);
SdMacSpec load_spec(const std::string& path);
void save_spec(const SdMacSpec& spec, const std::string& path);

// Scheme files share the dialect. `kind = round1` files carry [alphabets] U, V
// and kernels [u_kernel] (S), [v_kernel] (U S), [x1_kernel], [x2_kernel] (U V S).
// `kind = round2` files carry [alphabets] T1, T2 and kernels [input_law] (S,
// row over X1 X2), [t1_kernel], [t2_kernel] (Y T).

AuxiliaryScheme read_aux_scheme(std::istream& in, const SdMacSpec& spec, const std::string& source = "<stream>");
void write_aux_scheme(std::ostream& os, const AuxiliaryScheme& aux);
Round2Scheme read_round2_scheme(std::istream& in, const SdMacSpec& spec, const std::string& source = "<stream>");
void write_round2_scheme(std::ostream& os, const Round2Scheme& scheme);

std::string to_text(const SdMacSpec& spec);
std::string to_text(const AuxiliaryScheme& aux);
std::string to_text(const Round2Scheme& scheme);
std::string to_text(const ConditionalPmf& kernel);

}  // namespace sdkey

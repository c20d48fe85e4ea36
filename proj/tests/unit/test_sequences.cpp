#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "sdkey/error.hpp"
#include "sdkey/parallel.hpp"
#include "sdkey/report.hpp"
#include "sdkey/sequences.hpp"

using namespace sdkey;
using doctest::Approx;

namespace {
Variable bit(const std::string& name) { return {name, Alphabet::range(name, 2)}; }
}  // namespace

TEST_CASE("strong typicality") {
  const JointPmf p({bit("A")}, {0.75, 0.25});
  const TypicalityTest t(p, 0.1);
  const Sequence good{0, 0, 1, 0, 0, 0, 1, 0};
  const Sequence bad{1, 1, 1, 1, 0, 0, 0, 0};
  CHECK(t({&good}));
  CHECK_FALSE(t({&bad}));

  // cells with zero mass are forbidden at any eps
  const JointPmf ab({bit("A"), bit("B")}, {0.5, 0.0, 0.0, 0.5});
  const TypicalityTest wide(ab, 1.0);
  const Sequence a{0, 1, 0, 1}, same{0, 1, 0, 1}, off{0, 1, 0, 0};
  CHECK(wide({&a, &same}));
  CHECK_FALSE(wide({&a, &off}));

  const Sequence shorter{0, 1};
  CHECK_THROWS_AS(wide({&a, &shorter}), ValidationError);
  CHECK_THROWS_AS(TypicalityTest(p, -0.1), ValidationError);
}

TEST_CASE("codebook sizes") {
  CHECK(codebook_size(8, 0.0, 1000, "words") == 1);
  CHECK(codebook_size(4, 1.0, 1000, "words") == 16);
  CHECK(codebook_size(10, 0.58, 1000, "words") == 55);
  CHECK(codebook_size(3, 0.1, 1000, "words") == 1);
  CHECK_THROWS_AS(codebook_size(30, 1.0, 1000, "words"), ValidationError);
}

TEST_CASE("balanced partition") {
  Rng rng(1);
  for (std::size_t count : {1u, 7u, 16u, 55u}) {
    for (std::size_t parts : {1u, 2u, 6u}) {
      const auto cls = balanced_partition(rng, count, parts);
      std::vector<std::size_t> sizes(parts, 0);
      for (auto c : cls) ++sizes.at(c);
      const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
      CHECK(*hi - *lo <= 1);
    }
  }
}

TEST_CASE("sequence indexing") {
  for (std::uint64_t i = 0; i < 81; ++i) CHECK(sequence_index(sequence_from_index(i, 3, 4), 3) == i);
  CHECK(sequence_index(Sequence{1, 0, 1}, 2) == 5);
  CHECK(checked_power(2, 10, 1u << 20, "leaves") == 1024);
  CHECK_THROWS_AS(checked_power(3, 40, 1u << 20, "leaves"), BudgetExceeded);
}

TEST_CASE("product enumeration sums to one") {
  const std::vector<double> p{0.2, 0.0, 0.8};
  double total = 0.0;
  std::size_t leaves = 0;
  for_each_sequence(std::span<const double>(p), 5, [&](const Sequence& s, double m) {
    CHECK(std::find(s.begin(), s.end(), 1) == s.end());
    total += m;
    ++leaves;
  });
  CHECK(leaves == 32);
  CHECK(total == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("i.i.d. sampling concentrates") {
  Rng rng(12);
  const std::vector<double> p{0.1, 0.6, 0.3};
  const std::size_t n = 100000;
  const Sequence s = sample_iid(rng, p, n);
  for (std::size_t a = 0; a < 3; ++a) {
    const double freq = static_cast<double>(std::count(s.begin(), s.end(), a)) / n;
    CHECK(std::abs(freq - p[a]) <= 3.0 * std::sqrt(p[a] * (1 - p[a]) / n) + 1e-12);
  }
}

TEST_CASE("table measures") {
  const std::vector<double> j{0.4, 0.1, 0.1, 0.4};
  CHECK(table_mutual_information(j, 2, 2) == Approx(1.0 - binary_entropy(0.2)).epsilon(1e-12));
  const std::vector<double> scaled{4, 1, 1, 4};
  CHECK(table_mutual_information(scaled, 2, 2) == Approx(1.0 - binary_entropy(0.2)).epsilon(1e-12));
  CHECK(table_entropy(scaled) == Approx(1.0 + binary_entropy(0.2)).epsilon(1e-12));
}

TEST_CASE("seeds and workers") {
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  CHECK(derive_seed(5, 7, 9) == derive_seed(derive_seed(5, 7), 9));
  Rng a(42), b(42);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());

  std::vector<std::size_t> out(1000, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = i * i; });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw ValidationError("seven"); }),
                  ValidationError);
}

TEST_CASE("Wilson interval") {
  const WilsonInterval w = wilson_interval(0, 100);
  CHECK(w.lo == 0.0);
  CHECK(w.hi == Approx(0.0370).epsilon(1e-3));
  const WilsonInterval h = wilson_interval(50, 100);
  CHECK(h.lo == Approx(0.4038).epsilon(1e-3));
  CHECK(h.hi == Approx(0.5962).epsilon(1e-3));
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"x\"") == "\"say \"\"x\"\"\"");
  CHECK(csv_field("plain") == "plain");
}

#include <doctest.h>

#include "cwlab/codewords.hpp"
#include "cwlab/errors.hpp"
#include "oracles.hpp"

using namespace cwlab;

namespace {

const DescriptionSystem& shared_system() {
  static const DescriptionSystem sys([] {
    SystemConfig c;
    c.verify_witnesses = true;
    return c;
  }());
  return sys;
}

}  // namespace

TEST_CASE("is_codeword") {
  const auto& sys = shared_system();
  for (const auto& x : all_words(3)) {
    CHECK(is_codeword(sys, Level::zero, x, 0, 2).verdict);
    CHECK_FALSE(is_codeword(sys, Level::zero, x, 0, 1).verdict);
    CHECK(is_codeword(sys, Level::zero, x, 3, 5).verdict);
  }
  const auto cert = is_codeword(sys, Level::zero, Word::parse("11"), 1, 3);
  CHECK_FALSE(cert.verdict);
  CHECK(cert.worst_k == 4);
  CHECK(cert.worst_y.str() == "01");
  CHECK_THROWS_AS(is_codeword(sys, Level::zero, Word::parse("11"), 3, 3), ParameterError);

  SUBCASE("certificate agrees with a direct maximum over the ball") {
    for (int n = 1; n <= 4; ++n) {
      for (int e = 0; e <= n; ++e) {
        for (const auto& x : all_words(n)) {
          const auto c = is_codeword(sys, Level::zero, x, e, 3);
          int worst = 0;
          for (const auto& y : ball_iter(BallSpec(x, e))) {
            worst = std::max(worst, *sys.complexity(Level::zero, x, y, 24).value);
          }
          REQUIRE(c.worst_k == worst);
          REQUIRE(distance(c.worst_y, x) <= e);
          REQUIRE(*sys.complexity_value(Level::zero, x, c.worst_y) == worst);
          REQUIRE(c.verdict == (worst <= 3));
        }
      }
    }
  }
}

TEST_CASE("codeword_set") {
  const auto& sys = shared_system();
  CHECK(codeword_set(sys, Level::zero, 2, 1, 3).empty());
  CHECK(codeword_set(sys, Level::zero, 2, 0, 2).size() == 4);
  for (int n = 1; n <= 5; ++n) CHECK(codeword_set(sys, Level::zero, n, n, n + 2).size() == (1U << n));

  for (int level : {0, 1}) {
    const auto lv = static_cast<Level>(level);
    for (int n = 1; n <= 5; ++n) {
      for (int e = 0; e <= n; ++e) {
        for (int lambda = 0; lambda <= n + 3; ++lambda) {
          const Code w = codeword_set(sys, lv, n, e, lambda);
          for (const auto& x : all_words(n)) REQUIRE(w.contains(x) == is_codeword(sys, lv, x, e, lambda).verdict);
          const Code more = codeword_set(sys, lv, n, e, lambda + 1);
          for (const auto& x : w.members()) REQUIRE(more.contains(x));
          if (e < n) {
            const Code wider = codeword_set(sys, lv, n, e + 1, lambda);
            for (const auto& x : wider.members()) REQUIRE(w.contains(x));
          }
          if (lv == Level::one) {
            const Code base = codeword_set(sys, Level::zero, n, e, lambda);
            for (const auto& x : base.members()) REQUIRE(w.contains(x));
          }
        }
      }
    }
  }
}

TEST_CASE("max_complexity_codeword") {
  const auto& sys = shared_system();
  const auto best = max_complexity_codeword(sys, 2, 0, 2);
  // Oracle: enumerate every unconditional program of length <= 2 + |gnat(2)| + 2.
  const auto first = oracle::enumerate_programs(sys, Level::zero, Word(), 7);
  int expected = -1;
  std::string expected_x;
  for (const auto& x : all_words(2)) {
    const int k = static_cast<int>(first.at(x.str()).size());
    if (k > expected) {
      expected = k;
      expected_x = x.str();
    }
  }
  CHECK(best.k == expected);
  CHECK(best.x.str() == expected_x);
  CHECK(best.k == 7);
  CHECK(codeword_set(sys, Level::zero, 2, 0, 2).contains(best.x));
  CHECK_THROWS_AS(max_complexity_codeword(sys, 2, 1, 3), EmptySetError);
}

TEST_CASE("check_prop1") {
  const auto& sys = shared_system();
  const auto r = check_prop1(sys, Level::zero, 3, 1, 2);
  CHECK(r.pass);
  CHECK(r.explicit_bound == 7);
  CHECK(r.observed <= 7);

  const auto sat = check_prop1(sys, Level::zero, 4, 2, 6);
  CHECK(sat.observed == static_cast<long long>(ball_volume(4, 2)));
  CHECK(sat.pass);

  const auto empty = check_prop1(sys, Level::zero, 2, 1, 3);
  CHECK(empty.observed == 0);
  CHECK(empty.vacuous);
  CHECK(empty.pass);
}

TEST_CASE("check_prop2") {
  const auto& sys = shared_system();
  const Code rep = Code::from_words(3, {Word::parse("000"), Word::parse("111")});
  const auto r = check_prop2(sys, rep, 1, 0);
  CHECK(r.explicit_bound == 15);
  CHECK(r.observed <= 6);
  CHECK(r.pass);
  CHECK(*r.witness_valid);
  CHECK(r.witness_program->bits().starts_with("001" + gnat_encode(1) + "011000111"));

  CHECK(check_prop2(sys, Code::from_sorted(3, all_words(3)), 0, 0).pass);
  const auto g = check_prop2(sys, greedy_lex_code({4, 1, 1}), 1, 1);
  CHECK(g.pass);
  CHECK(*g.witness_valid);

  CHECK_THROWS_AS(check_prop2(sys, Code(3), 1, 0), ParameterError);
  CHECK_THROWS_AS(check_prop2(sys, Code::from_sorted(3, all_words(3)), 1, 0), ParameterError);
}

TEST_CASE("check_prop3") {
  const auto& sys = shared_system();
  const auto r = check_prop3(sys, 3, 1, 0);
  CHECK(r.explicit_bound == 8);
  CHECK(r.observed <= 6);
  CHECK(r.pass);
  CHECK(*r.witness_valid);

  for (int n = 1; n <= 5; ++n) {
    const auto full = check_prop3(sys, n, 0, 0);
    CHECK(*full.code_size == (1U << n));
    CHECK(*full.lower_bound == n);
    CHECK(*full.lower_observed >= n);
    CHECK(full.pass);
  }
  CHECK(check_prop3(sys, 2, 1, 0).pass);
}

TEST_CASE("check_prop4") {
  const auto& sys = shared_system();
  const auto r = check_prop4(sys, 2, 0, 2);
  CHECK(*r.enumeration_size == 4);
  CHECK(r.explicit_bound == 13);
  CHECK(r.observed <= 7);
  CHECK(r.pass);
  CHECK(*r.witness_valid);

  const auto empty = check_prop4(sys, 2, 1, 3);
  CHECK(empty.vacuous);
  CHECK(empty.pass);

  for (int n = 1; n <= 4; ++n) {
    const auto full = check_prop4(sys, n, n, n + 2);
    CHECK(*full.enumeration_size == (1U << n));
    CHECK(full.pass);
    CHECK(*full.witness_valid);
  }
}

TEST_CASE("report serialization") {
  const auto& sys = shared_system();
  const auto j = check_prop2(sys, greedy_lex_code({3, 1, 0}), 1, 0).to_json();
  for (const char* field : {"proposition", "params", "level", "explicit_bound", "bound_formula", "observed", "pass",
                            "vacuous", "witness_program", "worst_pair", "version_tag"}) {
    CHECK(j.contains(field));
  }
  CHECK(j["proposition"] == "P2");
  CHECK(j["version_tag"] == "rds-v1");
  CHECK(j["params"]["n"] == 3);
  CHECK(check_prop4(sys, 2, 1, 3).to_text().find("PASS(vacuous)") != std::string::npos);
}

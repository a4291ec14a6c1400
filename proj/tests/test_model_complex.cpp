#include <catch2/catch_amalgamated.hpp>

#include "hfi/model_complex.hpp"

using hfi::ModelComplex;

namespace {

const hfi::Generator& gen(const ModelComplex& c, const std::string& name) {
  auto idx = c.find(name);
  REQUIRE(idx.has_value());
  return c.generators()[*idx];
}

// Set of (target name, upower) for a source generator.
std::vector<std::pair<std::string, int>> diff_of(const ModelComplex& c,
                                                 const std::string& name) {
  auto idx = c.find(name);
  REQUIRE(idx.has_value());
  std::vector<std::pair<std::string, int>> out;
  for (const auto& t : c.differential()[*idx])
    out.emplace_back(c.generators()[t.target].name, t.upower);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("staircase with one step is the right-handed trefoil shape",
          "[model]") {
  auto c = hfi::build_staircase({1});
  REQUIRE(c.size() == 3);
  CHECK(gen(c, "x0").i == 0);
  CHECK(gen(c, "x0").j == 0);
  CHECK(gen(c, "x0").maslov == -1);
  CHECK(gen(c, "x1_1").i == -1);
  CHECK(gen(c, "x1_1").j == 0);
  CHECK(gen(c, "x1_1").maslov == -2);
  CHECK(gen(c, "x1_2").i == 0);
  CHECK(gen(c, "x1_2").j == -1);
  CHECK(gen(c, "x1_2").maslov == -2);
  CHECK(diff_of(c, "x0") ==
        std::vector<std::pair<std::string, int>>{{"x1_1", 0}, {"x1_2", 0}});
  CHECK(diff_of(c, "x1_1").empty());
  CHECK(diff_of(c, "x1_2").empty());
  CHECK(hfi::genus(c) == 1);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("staircase torsion {1,2,3}", "[model]") {
  auto c = hfi::build_staircase({1, 2, 3});
  REQUIRE(c.size() == 7);
  CHECK(gen(c, "x3_1").i == -2);
  CHECK(gen(c, "x3_1").j == 1);
  CHECK(gen(c, "x3_1").maslov == -4);  // -2·n(K), n(K)=3-2+1
  CHECK(gen(c, "x2_1").i == -1);
  CHECK(gen(c, "x2_1").j == 1);
  CHECK(gen(c, "x1_1").i == -1);
  CHECK(gen(c, "x1_1").j == 0);
  CHECK(gen(c, "x0").i == 0);
  CHECK(gen(c, "x0").j == 0);
  // side 2 is the (i,j) swap
  CHECK(gen(c, "x3_2").i == 1);
  CHECK(gen(c, "x3_2").j == -2);
  // odd m: x0 and even-index generators are the sources
  CHECK(diff_of(c, "x0") ==
        std::vector<std::pair<std::string, int>>{{"x1_1", 0}, {"x1_2", 0}});
  CHECK(diff_of(c, "x2_1") ==
        std::vector<std::pair<std::string, int>>{{"x1_1", 0}, {"x3_1", 0}});
  CHECK(diff_of(c, "x1_1").empty());
  CHECK(diff_of(c, "x3_1").empty());
  CHECK(hfi::genus(c) == 3);
  CHECK(hfi::staircase_n({1, 2, 3}) == 2);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("staircase with non-unit steps", "[model]") {
  // torsion {2,3}: genus 3, n(K)=1, steps of length 1 then 2
  auto c = hfi::build_staircase({2, 3});
  REQUIRE(c.size() == 5);
  CHECK(gen(c, "x2_1").i == -1);
  CHECK(gen(c, "x2_1").j == 2);
  CHECK(gen(c, "x2_1").maslov == -2);
  CHECK(gen(c, "x1_1").i == 0);
  CHECK(gen(c, "x1_1").j == 2);
  CHECK(gen(c, "x0").i == 0);
  CHECK(gen(c, "x0").j == 0);
  CHECK(diff_of(c, "x1_1") ==
        std::vector<std::pair<std::string, int>>{{"x0", 0}, {"x2_1", 0}});
  CHECK(hfi::genus(c) == 3);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("empty torsion builds the unknot complex", "[model]") {
  auto c = hfi::build_staircase({});
  REQUIRE(c.size() == 1);
  CHECK(gen(c, "x0").maslov == 0);
  CHECK(hfi::genus(c) == 0);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("mirror staircase with one step is the left-handed trefoil shape",
          "[model]") {
  auto c = hfi::build_mirror_staircase({1});
  REQUIRE(c.size() == 3);
  CHECK(gen(c, "x1_1").i == 1);
  CHECK(gen(c, "x1_1").j == 0);
  CHECK(gen(c, "x1_1").maslov == 2);
  CHECK(gen(c, "x1_2").i == 0);
  CHECK(gen(c, "x1_2").j == 1);
  CHECK(gen(c, "x1_2").maslov == 2);
  CHECK(gen(c, "x0").maslov == 1);
  CHECK(diff_of(c, "x1_1") ==
        std::vector<std::pair<std::string, int>>{{"x0", 0}});
  CHECK(diff_of(c, "x1_2") ==
        std::vector<std::pair<std::string, int>>{{"x0", 0}});
  CHECK(diff_of(c, "x0").empty());
  CHECK(hfi::genus(c) == 1);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("mirror staircase torsion {1,2,3}", "[model]") {
  auto c = hfi::build_mirror_staircase({1, 2, 3});
  REQUIRE(c.size() == 7);
  // extremal generator sits at (n(K), n(K)-g) = (2,-1)
  CHECK(gen(c, "x3_1").i == 2);
  CHECK(gen(c, "x3_1").j == -1);
  CHECK(gen(c, "x3_1").maslov == 4);
  CHECK(gen(c, "x2_1").i == 1);
  CHECK(gen(c, "x2_1").j == -1);
  CHECK(gen(c, "x1_1").i == 1);
  CHECK(gen(c, "x1_1").j == 0);
  CHECK(gen(c, "x0").i == 0);
  CHECK(gen(c, "x0").j == 0);
  // Alexander grading of the extremal generator is -g
  CHECK(gen(c, "x3_1").j - gen(c, "x3_1").i == -3);
  CHECK(diff_of(c, "x1_1") ==
        std::vector<std::pair<std::string, int>>{{"x0", 0}, {"x2_1", 0}});
  CHECK(diff_of(c, "x3_1") ==
        std::vector<std::pair<std::string, int>>{{"x2_1", 0}});
  CHECK(diff_of(c, "x2_1").empty());
  CHECK(hfi::genus(c) == 3);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("mirror staircase torsion {1,2}", "[model]") {
  auto c = hfi::build_mirror_staircase({1, 2});
  REQUIRE(c.size() == 5);
  CHECK(gen(c, "x2_1").i == 1);
  CHECK(gen(c, "x2_1").j == -1);
  CHECK(gen(c, "x2_1").maslov == 2);
  CHECK(gen(c, "x1_1").i == 0);
  CHECK(gen(c, "x1_1").j == -1);
  CHECK(diff_of(c, "x0") ==
        std::vector<std::pair<std::string, int>>{{"x1_1", 0}, {"x1_2", 0}});
  CHECK(diff_of(c, "x2_1") ==
        std::vector<std::pair<std::string, int>>{{"x1_1", 0}});
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("thin canonical model for tau=0, one square is the figure-eight",
          "[model]") {
  auto c = hfi::build_thin_canonical(0, 1);
  REQUIRE(c.size() == 5);
  CHECK(gen(c, "x0").maslov == 0);
  CHECK(gen(c, "a").i == 0);
  CHECK(gen(c, "a").j == 0);
  CHECK(gen(c, "a").maslov == 0);
  CHECK(gen(c, "b").i == -1);
  CHECK(gen(c, "b").j == 0);
  CHECK(gen(c, "b").maslov == -1);
  CHECK(gen(c, "c").i == 0);
  CHECK(gen(c, "c").j == -1);
  CHECK(gen(c, "e").i == 0);
  CHECK(gen(c, "e").j == 0);
  CHECK(gen(c, "e").maslov == 0);
  CHECK(diff_of(c, "a") ==
        std::vector<std::pair<std::string, int>>{{"b", 0}, {"c", 0}});
  CHECK(diff_of(c, "b") == std::vector<std::pair<std::string, int>>{{"e", 1}});
  CHECK(diff_of(c, "c") == std::vector<std::pair<std::string, int>>{{"e", 1}});
  CHECK(hfi::genus(c) == 1);
  CHECK(hfi::validate_complex(c).ok);
  REQUIRE(c.tau().has_value());
  CHECK(*c.tau() == 0);
}

TEST_CASE("thin canonical tau=1, one square", "[model]") {
  auto c = hfi::build_thin_canonical(1, 1);
  REQUIRE(c.size() == 7);
  // staircase generators agree with build_staircase({1}) but Maslov comes
  // from the thin formula i+j-tau, which matches the anchored value
  CHECK(gen(c, "x1_1").maslov == -2);
  CHECK(gen(c, "x0").maslov == -1);
  CHECK(gen(c, "a").maslov == -1);
  CHECK(gen(c, "b").maslov == -2);
  CHECK(hfi::validate_complex(c).ok);
}

TEST_CASE("thin canonical with an off-diagonal pair", "[model]") {
  auto c = hfi::build_thin_canonical(-2, 2);
  // mirror staircase {1,2} (5 gens) + one square pair (8 gens)
  REQUIRE(c.size() == 13);
  CHECK(gen(c, "a1").i == 1);
  CHECK(gen(c, "a1").j == -1);
  CHECK(gen(c, "a1").maslov == 2);  // i+j-tau = 0+2
  CHECK(gen(c, "b1").i == 0);
  CHECK(gen(c, "b1").j == -1);
  CHECK(gen(c, "a1p").i == -1);
  CHECK(gen(c, "a1p").j == 1);
  CHECK(gen(c, "b1p").i == -2);
  CHECK(gen(c, "b1p").j == 1);
  CHECK(gen(c, "c1p").i == -1);
  CHECK(gen(c, "c1p").j == 0);
  CHECK(diff_of(c, "a1p") ==
        std::vector<std::pair<std::string, int>>{{"b1p", 0}, {"c1p", 0}});
  CHECK(diff_of(c, "b1p") ==
        std::vector<std::pair<std::string, int>>{{"e1p", 1}});
  CHECK(hfi::validate_complex(c).ok);

  // three squares: one pair + the diagonal one
  auto d = hfi::build_thin_canonical(-2, 3);
  REQUIRE(d.size() == 5 + 8 + 4);
  CHECK(gen(d, "a").i == 0);
  CHECK(gen(d, "a").j == 0);
  CHECK(hfi::validate_complex(d).ok);

  // custom pair shift
  auto e = hfi::build_thin_canonical(0, 2, {3});
  CHECK(gen(e, "a1").i == 3);
  CHECK(gen(e, "a1").j == -3);
  CHECK(hfi::validate_complex(e).ok);
}

TEST_CASE("validate_complex flags broken inputs", "[model]") {
  // filtration violation: target above source
  ModelComplex bad1("bad1");
  bad1.add_generator("x", 0, 0, 0);
  bad1.add_generator("y", 1, 0, -1);
  bad1.add_term("x", "y", 0);
  auto r1 = hfi::validate_complex(bad1);
  CHECK_FALSE(r1.ok);

  // Maslov violation: drop of 2 instead of 1
  ModelComplex bad2("bad2");
  bad2.add_generator("x", 0, 0, 0);
  bad2.add_generator("y", -1, 0, -2);
  bad2.add_term("x", "y", 0);
  CHECK_FALSE(hfi::validate_complex(bad2).ok);

  // d^2 != 0
  ModelComplex bad3("bad3");
  bad3.add_generator("x", 0, 0, 0);
  bad3.add_generator("y", 0, -1, -1);
  bad3.add_generator("z", 0, -2, -2);
  bad3.add_term("x", "y", 0);
  bad3.add_term("y", "z", 0);
  CHECK_FALSE(hfi::validate_complex(bad3).ok);

  // duplicate generator name
  ModelComplex bad4("bad4");
  bad4.add_generator("x", 0, 0, 0);
  bad4.add_generator("x", 0, -1, -1);
  CHECK_FALSE(hfi::validate_complex(bad4).ok);

  // negative U-power in a differential
  ModelComplex bad5("bad5");
  bad5.add_generator("x", 0, 0, 0);
  bad5.add_generator("y", 1, 1, 1);
  bad5.add_term("y", "x", -1);
  CHECK_FALSE(hfi::validate_complex(bad5).ok);
}

TEST_CASE("torus knot Alexander polynomials", "[model]") {
  CHECK(hfi::torus_alexander(2, 3) == std::vector<int>{1, -1, 1});
  CHECK(hfi::torus_alexander(2, 5) == std::vector<int>{1, -1, 1, -1, 1});
  CHECK(hfi::torus_alexander(2, 7) ==
        std::vector<int>{1, -1, 1, -1, 1, -1, 1});
  CHECK(hfi::torus_alexander(3, 4) ==
        std::vector<int>{1, -1, 0, 1, 0, -1, 1});
  CHECK(hfi::torus_alexander(3, 5) ==
        std::vector<int>{1, -1, 0, 1, -1, 1, 0, -1, 1});
  CHECK_THROWS_AS(hfi::torus_alexander(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(hfi::torus_alexander(1, 3), std::invalid_argument);
}

TEST_CASE("L-space form recognition", "[model]") {
  CHECK(hfi::from_alexander_lspace({1, -1, 1}) == std::vector<int>{1});
  CHECK(hfi::from_alexander_lspace({1, -1, 1, -1, 1, -1, 1}) ==
        std::vector<int>{1, 2, 3});
  CHECK(hfi::from_alexander_lspace({1, -1, 0, 1, 0, -1, 1}) ==
        std::vector<int>{2, 3});
  CHECK(hfi::from_alexander_lspace({1}) == std::vector<int>{});
  // t^2 + t^-2 is not of L-space form
  CHECK_THROWS_AS(hfi::from_alexander_lspace({1, 0, 0, 0, 1}),
                  hfi::NotLSpaceForm);
  // wrong alternation
  CHECK_THROWS_AS(hfi::from_alexander_lspace({1, 1, 1}), hfi::NotLSpaceForm);
  // asymmetric
  CHECK_THROWS_AS(hfi::from_alexander_lspace({1, -1, 0}), hfi::NotLSpaceForm);
}

TEST_CASE("diameter", "[model]") {
  CHECK(hfi::diameter(hfi::build_staircase({1})) == 2);
  CHECK(hfi::diameter(hfi::build_thin_canonical(0, 1)) == 2);
  CHECK(hfi::diameter(hfi::build_staircase({1, 2, 3})) == 6);
}

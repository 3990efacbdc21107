#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "monodromy/braid.hpp"
#include "support/checks.hpp"

using namespace monodromy;

namespace {

// Circle of cubics x^3 - 3x + c, c on a circle of given center and radius,
// sampled on the midpoint-offset grid so conjugate root pairs never tie.
LoopSamples circle_loop(Complex center, double radius, int n) {
  std::vector<double> params;
  std::vector<CubicPoly> polys;
  for (int k = 0; k <= n; ++k) {
    const double frac =
        k == n ? 0.5 / n : (k + 0.5) / static_cast<double>(n);
    const double angle = 2.0 * std::numbers::pi * frac;
    const Complex c =
        center + radius * std::exp(Complex{0.0, 1.0} * angle);
    params.push_back(k == n ? 1.0 + 0.5 / n : frac);
    polys.emplace_back(Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{-3.0, 0.0},
                       c);
  }
  return {std::move(params), std::move(polys)};
}

} // namespace

TEST_CASE("loop around one critical value braids one transposition") {
  const LoopSamples loop = circle_loop({2.0, 0.0}, 0.5, 64);
  const TrackResult result = track_roots(loop);
  CHECK_EQ(result.word.size(), 1u);
  CHECK_EQ(result.word.letters()[0].index, 2);
  CHECK_EQ(result.permutation, Permutation3{0, 2, 1});
  CHECK_EQ(braid_to_matrix(result.word), b2());
  // Stable under refinement: the same braid word at twice the resolution.
  const TrackResult fine = track_roots(loop.subdivided());
  CHECK_EQ(fine.word, result.word);
  CHECK_EQ(fine.permutation, result.permutation);
}

TEST_CASE("constant family gives the empty word") {
  std::vector<double> params;
  std::vector<CubicPoly> polys;
  for (int k = 0; k <= 16; ++k) {
    params.push_back(k / 16.0);
    polys.emplace_back(Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{-3.0, 0.0},
                       Complex{0.5, 0.0});
  }
  const TrackResult result = track_roots({params, polys});
  CHECK(result.word.empty());
  CHECK_EQ(result.permutation, Permutation3{0, 1, 2});
  CHECK_EQ(braid_to_matrix(result.word), UnimodularMatrix::identity());
}

TEST_CASE("undersampled near-critical loop demands refinement") {
  // Center 2.2, radius 0.21: passes within 0.01 of the critical value c = 2,
  // where two roots collide. 16 samples cannot certify the continuation.
  const LoopSamples coarse = circle_loop({2.2, 0.0}, 0.21, 16);
  CHECK_THROWS_AS(track_roots(coarse), RefinementNeeded);
  try {
    track_roots(coarse);
  } catch (const RefinementNeeded& e) {
    CHECK_GE(e.sample_index(), 1u);
    CHECK_LT(e.sample_index(), coarse.size());
  }
  // Repeated subdivision resolves it to the same transposition as the wide
  // loop around c = 2 (both enclose exactly that one critical value).
  LoopSamples loop = circle_loop({2.2, 0.0}, 0.21, 16);
  TrackResult result{{}, {0, 1, 2}};
  int depth = 0;
  while (true) {
    try {
      result = track_roots(loop);
      break;
    } catch (const RefinementNeeded&) {
      REQUIRE_LT(depth, 12);
      loop = loop.subdivided();
      ++depth;
    }
  }
  CHECK_GE(depth, 1);
  CHECK_EQ(result.word.size(), 1u);
  CHECK_EQ(result.permutation, Permutation3{0, 2, 1});
}

TEST_CASE("sample at a critical value is degenerate") {
  // x^3 - 3x + 2 has the double root x = 1.
  std::vector<double> params;
  std::vector<CubicPoly> polys;
  for (int k = 0; k <= 16; ++k) {
    params.push_back(k / 16.0);
    polys.emplace_back(Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{-3.0, 0.0},
                       Complex{2.0, 0.0});
  }
  CHECK_THROWS_AS(track_roots({params, polys}), DegenerateSampleError);
}

TEST_CASE("loop sample validation") {
  std::vector<double> params{0.0, 1.0};
  std::vector<CubicPoly> polys(
      2, CubicPoly({1.0, 0.0}, {0.0, 0.0}, {-3.0, 0.0}, {0.5, 0.0}));
  // Too short.
  CHECK_THROWS_AS(LoopSamples(params, polys), DomainError);
  // Mismatched lengths.
  std::vector<double> p17(17, 0.0);
  for (int k = 0; k <= 16; ++k) p17[static_cast<std::size_t>(k)] = k / 16.0;
  std::vector<CubicPoly> q16(
      16, CubicPoly({1.0, 0.0}, {0.0, 0.0}, {-3.0, 0.0}, {0.5, 0.0}));
  CHECK_THROWS_AS(LoopSamples(p17, q16), DomainError);
  // Open loop (first and last polynomials differ).
  std::vector<CubicPoly> open;
  for (int k = 0; k <= 16; ++k)
    open.emplace_back(Complex{1.0, 0.0}, Complex{0.0, 0.0}, Complex{-3.0, 0.0},
                      Complex{0.5 + 0.01 * k, 0.0});
  CHECK_THROWS_AS(LoopSamples(p17, open), DomainError);
}

TEST_CASE("subdivision doubles the interval count and keeps closure") {
  const LoopSamples loop = circle_loop({2.0, 0.0}, 0.5, 32);
  const LoopSamples fine = loop.subdivided();
  CHECK_EQ(fine.size(), 2 * loop.size() - 1);
  CHECK_EQ(fine.polys().front().c0(), loop.polys().front().c0());
  CHECK_EQ(fine.polys().back().c0(), loop.polys().back().c0());
}

TEST_CASE("braid words reduce freely") {
  BraidWord w;
  w.push({1, 1});
  w.push({1, -1});
  CHECK(w.empty());
  w.push({2, 1});
  w.push({1, 1});
  w.push({1, -1});
  CHECK_EQ(w.size(), 1u);
  CHECK_EQ(w.letters()[0], BraidLetter{2, 1});
  const BraidWord u({{1, 1}, {2, 1}});
  const BraidWord v = u * u.inverse();
  CHECK(v.empty());
}

TEST_CASE("representation is a homomorphism") {
  const BraidWord u({{1, 1}, {2, 1}});
  const BraidWord v({{2, -1}, {1, 1}});
  CHECK_EQ(braid_to_matrix(u * v), braid_to_matrix(u) * braid_to_matrix(v));
  CHECK_EQ(braid_to_matrix(u.inverse()), braid_to_matrix(u).inverse());
  // Braid relation holds in the image.
  const BraidWord left({{1, 1}, {2, 1}, {1, 1}});
  const BraidWord right({{2, 1}, {1, 1}, {2, 1}});
  CHECK_EQ(braid_to_matrix(left), braid_to_matrix(right));
  // Powers of one generator map to shears.
  BraidWord square;
  square.push({2, 1});
  square.push({2, 1});
  CHECK_EQ(braid_to_matrix(square), UnimodularMatrix(1, 2, 0, 1));
}

TEST_CASE("word permutation projects the tracked braid") {
  const LoopSamples loop = circle_loop({2.0, 0.0}, 0.5, 64);
  const TrackResult result = track_roots(loop);
  CHECK_EQ(word_permutation(result.word), result.permutation);
  CHECK_EQ(word_permutation(BraidWord({{1, 1}})), Permutation3{1, 0, 2});
  // s1 then s2: strand 0 moves to position 1, then on to position 2.
  CHECK_EQ(word_permutation(BraidWord({{1, 1}, {2, 1}})),
           Permutation3{2, 0, 1});
}

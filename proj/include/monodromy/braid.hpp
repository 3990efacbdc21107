#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "monodromy/errors.hpp"
#include "monodromy/sl2z.hpp"
#include "monodromy/weierstrass.hpp"

namespace monodromy {

// Single letter of the braid group B3: generator index in {1, 2}, sign +1
// (left strand passes under) or -1.
struct BraidLetter {
  int index;
  int sign;
  bool operator==(const BraidLetter&) const = default;
};

// Word in B3, kept free-reduced (no adjacent inverse pairs).
class BraidWord {
public:
  BraidWord() = default;
  explicit BraidWord(const std::vector<BraidLetter>& letters);

  const std::vector<BraidLetter>& letters() const noexcept { return letters_; }
  bool empty() const noexcept { return letters_.empty(); }
  std::size_t size() const noexcept { return letters_.size(); }

  // Appends one letter, cancelling against the tail when it is the inverse.
  void push(BraidLetter letter);
  BraidWord operator*(const BraidWord& rhs) const; // concatenation, reduced
  BraidWord inverse() const;
  bool operator==(const BraidWord&) const = default;

private:
  std::vector<BraidLetter> letters_;
};

// perm[i] = final position of the strand that started at position i
// (positions order roots by real part, ties by imaginary part).
using Permutation3 = std::array<int, 3>;

// Closed sampled loop of cubics: params and polys have equal length >= 16
// and the first and last entries coincide (closure is stored explicitly).
class LoopSamples {
public:
  LoopSamples(std::vector<double> params, std::vector<CubicPoly> polys);

  const std::vector<double>& params() const noexcept { return params_; }
  const std::vector<CubicPoly>& polys() const noexcept { return polys_; }
  std::size_t size() const noexcept { return polys_.size(); }

  // Same polygonal loop with every chord midpoint inserted.
  LoopSamples subdivided() const;

private:
  std::vector<double> params_;
  std::vector<CubicPoly> polys_;
};

struct TrackResult {
  BraidWord word;
  Permutation3 permutation;
};

// Continues the three roots around the loop, emitting one braid letter per
// adjacent position swap. A continuation step is accepted only when the
// largest single root displacement is below one third of the smallest
// pairwise root gap of the earlier sample; otherwise RefinementNeeded is
// raised with the index of the later sample. A sample whose roots are not
// separated to working precision raises DegenerateSampleError.
TrackResult track_roots(const LoopSamples& loop);

// Braid group representation: s1 -> b1, s2 -> b2, letters multiplied left
// to right in word order.
UnimodularMatrix braid_to_matrix(const BraidWord& word);

// Image of the word in S3 acting on positions (same composition order as
// braid_to_matrix). Signs are irrelevant for the projection.
Permutation3 word_permutation(const BraidWord& word);

} // namespace monodromy

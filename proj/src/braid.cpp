#include "monodromy/braid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace monodromy {

BraidWord::BraidWord(const std::vector<BraidLetter>& letters) {
  for (const auto& l : letters) push(l);
}

void BraidWord::push(BraidLetter letter) {
  if (letter.index != 1 && letter.index != 2)
    throw DomainError("braid letter index must be 1 or 2");
  if (letter.sign != 1 && letter.sign != -1)
    throw DomainError("braid letter sign must be +1 or -1");
  if (!letters_.empty() && letters_.back().index == letter.index &&
      letters_.back().sign == -letter.sign) {
    letters_.pop_back();
    return;
  }
  letters_.push_back(letter);
}

BraidWord BraidWord::operator*(const BraidWord& rhs) const {
  BraidWord out = *this;
  for (const auto& l : rhs.letters_) out.push(l);
  return out;
}

BraidWord BraidWord::inverse() const {
  BraidWord out;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.push({it->index, -it->sign});
  return out;
}

LoopSamples::LoopSamples(std::vector<double> params,
                         std::vector<CubicPoly> polys)
    : params_(std::move(params)), polys_(std::move(polys)) {
  if (params_.size() != polys_.size())
    throw DomainError("loop parameter and polynomial counts differ");
  if (polys_.size() < 16)
    throw DomainError("loop needs at least 16 samples");
  const CubicPoly& first = polys_.front();
  const CubicPoly& last = polys_.back();
  double scale = 1.0, diff = 0.0;
  const Complex cf[4] = {first.c3(), first.c2(), first.c1(), first.c0()};
  const Complex cl[4] = {last.c3(), last.c2(), last.c1(), last.c0()};
  for (int i = 0; i < 4; ++i) {
    scale = std::max(scale, std::abs(cf[i]));
    diff = std::max(diff, std::abs(cf[i] - cl[i]));
  }
  if (diff > 1e-12 * scale)
    throw DomainError("loop is not closed (first and last samples differ)");
}

LoopSamples LoopSamples::subdivided() const {
  std::vector<double> params;
  std::vector<CubicPoly> polys;
  params.reserve(2 * params_.size() - 1);
  polys.reserve(2 * polys_.size() - 1);
  for (std::size_t i = 0; i + 1 < polys_.size(); ++i) {
    params.push_back(params_[i]);
    polys.push_back(polys_[i]);
    params.push_back(0.5 * (params_[i] + params_[i + 1]));
    const CubicPoly& p = polys_[i];
    const CubicPoly& q = polys_[i + 1];
    polys.emplace_back(0.5 * (p.c3() + q.c3()), 0.5 * (p.c2() + q.c2()),
                       0.5 * (p.c1() + q.c1()), 0.5 * (p.c0() + q.c0()));
  }
  params.push_back(params_.back());
  polys.push_back(polys_.back());
  return {std::move(params), std::move(polys)};
}

namespace {

// Positions order roots by real part, ties broken by imaginary part.
bool position_less(const Complex& x, const Complex& y) {
  if (x.real() != y.real()) return x.real() < y.real();
  return x.imag() < y.imag();
}

double min_gap(const std::array<Complex, 3>& r) {
  return std::min({std::abs(r[0] - r[1]), std::abs(r[1] - r[2]),
                   std::abs(r[0] - r[2])});
}

double root_scale(const std::array<Complex, 3>& r) {
  return std::max({1.0, std::abs(r[0]), std::abs(r[1]), std::abs(r[2])});
}

// All six bijections {0,1,2} -> {0,1,2}.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// Ranks of the three strand roots: rank[s] = position of strand s.
std::array<int, 3> ranks(const std::array<Complex, 3>& strand_roots) {
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return position_less(strand_roots[static_cast<std::size_t>(i)],
                         strand_roots[static_cast<std::size_t>(j)]);
  });
  std::array<int, 3> rank{};
  for (int pos = 0; pos < 3; ++pos)
    rank[static_cast<std::size_t>(idx[static_cast<std::size_t>(pos)])] = pos;
  return rank;
}

} // namespace

TrackResult track_roots(const LoopSamples& loop) {
  const auto& polys = loop.polys();
  const std::size_t n = polys.size();

  // Roots per sample, with degeneracy screening.
  std::vector<std::array<Complex, 3>> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    roots[i] = polys[i].roots();
    if (min_gap(roots[i]) < 1e-9 * root_scale(roots[i]))
      throw DegenerateSampleError(
          "loop sample " + std::to_string(i) + " carries a multiple root");
  }

  // strand_roots[s] = current root of the strand that started as sample-0
  // root s; positions are ranks under position_less.
  std::array<Complex, 3> strand_roots = roots[0];
  std::array<int, 3> pos = ranks(strand_roots);

  BraidWord word;
  for (std::size_t i = 1; i < n; ++i) {
    // Minimax matching of the previous strand roots onto the new roots.
    int best = -1;
    double best_cost = 0.0;
    for (int p = 0; p < 6; ++p) {
      double cost = 0.0;
      for (int s = 0; s < 3; ++s)
        cost = std::max(
            cost, std::abs(roots[i][static_cast<std::size_t>(kPerms[p][s])] -
                           strand_roots[static_cast<std::size_t>(s)]));
      if (best < 0 || cost < best_cost) {
        best = p;
        best_cost = cost;
      }
    }
    if (best_cost >= min_gap(strand_roots) / 3.0)
      throw RefinementNeeded(
          i, "root continuation ambiguous between samples " +
                 std::to_string(i - 1) + " and " + std::to_string(i));

    std::array<Complex, 3> new_roots;
    for (int s = 0; s < 3; ++s)
      new_roots[static_cast<std::size_t>(s)] =
          roots[i][static_cast<std::size_t>(kPerms[best][s])];
    const std::array<int, 3> new_pos = ranks(new_roots);

    // Decompose the position change into adjacent transpositions (bubble
    // order, lowest position first); each swap is one crossing.
    std::array<int, 3> work = pos; // work[s] = position of strand s
    bool changed = true;
    while (changed) {
      changed = false;
      for (int q = 0; q < 2; ++q) {
        // Strands currently at positions q and q+1.
        int su = -1, sv = -1;
        for (int s = 0; s < 3; ++s) {
          if (work[static_cast<std::size_t>(s)] == q) su = s;
          if (work[static_cast<std::size_t>(s)] == q + 1) sv = s;
        }
        // Swap needed iff their target order is reversed.
        if (new_pos[static_cast<std::size_t>(su)] >
            new_pos[static_cast<std::size_t>(sv)]) {
          const double im_u =
              0.5 * (strand_roots[static_cast<std::size_t>(su)].imag() +
                     new_roots[static_cast<std::size_t>(su)].imag());
          const double im_v =
              0.5 * (strand_roots[static_cast<std::size_t>(sv)].imag() +
                     new_roots[static_cast<std::size_t>(sv)].imag());
          const double sep_scale = root_scale(strand_roots);
          if (std::abs(im_u - im_v) < 1e-12 * sep_scale)
            throw RefinementNeeded(
                i, "crossing orientation ambiguous at sample " +
                       std::to_string(i));
          word.push({q + 1, im_u < im_v ? 1 : -1});
          std::swap(work[static_cast<std::size_t>(su)],
                    work[static_cast<std::size_t>(sv)]);
          changed = true;
        }
      }
    }
    pos = new_pos;
    strand_roots = new_roots;
  }

  // Final positions against initial positions: perm[initial position of
  // strand s] = final position of strand s.
  const std::array<int, 3> start_pos = ranks(roots[0]);
  Permutation3 perm{};
  for (int s = 0; s < 3; ++s)
    perm[static_cast<std::size_t>(start_pos[static_cast<std::size_t>(s)])] =
        pos[static_cast<std::size_t>(s)];
  return {word, perm};
}

UnimodularMatrix braid_to_matrix(const BraidWord& word) {
  UnimodularMatrix acc = UnimodularMatrix::identity();
  for (const auto& l : word.letters()) {
    UnimodularMatrix gen = l.index == 1 ? b1() : b2();
    if (l.sign < 0) gen = gen.inverse();
    acc = acc * gen;
  }
  return acc;
}

Permutation3 word_permutation(const BraidWord& word) {
  Permutation3 perm{0, 1, 2};
  // perm[p] = current position of the strand that started at position p;
  // each letter s_q swaps whatever strands sit at positions q-1 and q.
  for (const auto& l : word.letters()) {
    const int q = l.index - 1;
    for (auto& v : perm) {
      if (v == q)
        v = q + 1;
      else if (v == q + 1)
        v = q;
    }
  }
  return perm;
}

} // namespace monodromy

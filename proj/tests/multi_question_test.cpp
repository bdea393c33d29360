#include <qknow/multi_question.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

namespace qknow {
namespace {

Subspace coords(std::size_t d, std::initializer_list<std::size_t> ks) {
  std::vector<Vector> vs;
  for (auto k : ks) vs.push_back(Vector::unit(d, k));
  return canonicalize(vs, d);
}

// Two commuting questions on C^4: {e1,e2 | e3,e4} and {e1,e4 | e2,e3}.
std::vector<SpectralFamily> compatible_pair() {
  return {SpectralFamily({{"a1", coords(4, {0, 1})}, {"a2", coords(4, {2, 3})}}),
          SpectralFamily({{"b1", coords(4, {0, 3})}, {"b2", coords(4, {1, 2})}})};
}

// Two mutually unbiased bases of C^2: standard and {(1,i), (1,-i)}.
std::vector<SpectralFamily> incompatible_pair() {
  const GaussianRational i = GaussianRational::i();
  return {SpectralFamily({{"e11", coords(2, {0})}, {"e12", coords(2, {1})}}),
          SpectralFamily({{"e21", Subspace::span({Vector{1, i}}, 2)}, {"e22", Subspace::span({Vector{1, -i}}, 2)}})};
}

TEST(FamiliesCommute, Examples) {
  const auto compatible = compatible_pair();
  EXPECT_TRUE(families_commute(compatible[0], compatible[0]));
  EXPECT_TRUE(families_commute(compatible[0], compatible[1]));
  const auto incompatible = incompatible_pair();
  for (const auto& a : incompatible[0].blocks())
    for (const auto& b : incompatible[1].blocks())
      ASSERT_FALSE(inner(a.subspace.basis()[0], b.subspace.basis()[0]).is_zero());
  EXPECT_FALSE(families_commute(incompatible[0], incompatible[1]));
  EXPECT_THROW(families_commute(compatible[0], incompatible[0]), DimensionMismatch);
}

TEST(FamiliesCommute, AgreesWithProjectorMatrices) {
  testing::Gen gen(3);
  int commuting = 0;
  for (int k = 0; k < 80; ++k) {
    const std::size_t d = gen.uniform(1, 4);
    const auto basis = gen.orthogonal_basis(d);
    const SpectralFamily f = gen.family_over(basis);
    const SpectralFamily g = gen.coin() ? gen.family_over(basis) : gen.family(d);
    const bool lattice = families_commute(f, g);
    ASSERT_EQ(lattice, testing::families_commute_by_matrices(f, g));
    ASSERT_EQ(lattice, families_commute(g, f));
    ASSERT_TRUE(families_commute(f, f));
    commuting += lattice;
  }
  EXPECT_GT(commuting, 10);
  EXPECT_LT(commuting, 80);
}

TEST(JointRefinement, Examples) {
  const auto pair = compatible_pair();
  EXPECT_EQ(joint_refinement(std::vector<SpectralFamily>{pair[0]}), pair[0]);

  const SpectralFamily r = joint_refinement(pair);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r.blocks()[0], (LabeledBlock{"(a1,b1)", coords(4, {0})}));
  EXPECT_EQ(r.blocks()[1], (LabeledBlock{"(a1,b2)", coords(4, {1})}));
  EXPECT_EQ(r.blocks()[2], (LabeledBlock{"(a2,b1)", coords(4, {3})}));
  EXPECT_EQ(r.blocks()[3], (LabeledBlock{"(a2,b2)", coords(4, {2})}));

  const SpectralFamily self = joint_refinement(std::vector<SpectralFamily>{pair[0], pair[0]});
  ASSERT_EQ(self.size(), pair[0].size());
  for (std::size_t j = 0; j < self.size(); ++j) EXPECT_EQ(self.block(j), pair[0].block(j));
  EXPECT_EQ(self.blocks()[0].label, "(a1,a1)");
}

TEST(JointRefinement, RejectsNonCommutingAndEmptyLists) {
  EXPECT_THROW(joint_refinement(incompatible_pair()), NonCommutingFamilies);
  EXPECT_THROW(joint_refinement(std::vector<SpectralFamily>{}), std::invalid_argument);
}

TEST(JointRefinement, RefinesEveryInput) {
  testing::Gen gen(17);
  for (int k = 0; k < 60; ++k) {
    const std::size_t d = gen.uniform(1, 6);
    const auto basis = gen.orthogonal_basis(d);
    std::vector<SpectralFamily> fs;
    for (std::size_t n = gen.uniform(1, 3); n > 0; --n) fs.push_back(gen.family_over(basis));
    const SpectralFamily r = joint_refinement(fs);
    for (const auto& f : fs)
      for (const auto& b : f.blocks()) {
        Subspace inside = Subspace::zero(d);
        for (const auto& rb : r.blocks())
          if (leq(rb.subspace, b.subspace)) inside = join(inside, rb.subspace);
        ASSERT_EQ(inside, b.subspace);
      }
  }
}

TEST(KnowsVonNeumann, Examples) {
  const auto pair = compatible_pair();
  const Vector psi{1, 1, 1, 0};
  EXPECT_TRUE(knows_von_neumann(pair, psi, coords(4, {0, 1, 2})));
  EXPECT_TRUE(knows_von_neumann(pair, psi, Subspace::full(4)));
  EXPECT_FALSE(knows_von_neumann(pair, psi, coords(4, {0, 1})));
  EXPECT_THROW(knows_von_neumann(incompatible_pair(), Vector{1, 0}, coords(2, {0})), NonCommutingFamilies);
}

TEST(KnowsEitherOr, Examples) {
  const auto pair = compatible_pair();
  EXPECT_FALSE(knows_either_or(pair, Vector{1, 1, 1, 0}, coords(4, {0, 1, 2})));
  EXPECT_TRUE(knows_either_or(pair, Vector{1, 1, 1, 0}, Subspace::full(4)));

  const auto incompatible = incompatible_pair();
  EXPECT_TRUE(knows_either_or(incompatible, Vector{1, 0}, coords(2, {0})));
  const Vector phi{1, GaussianRational::i()};
  EXPECT_TRUE(knows_either_or(incompatible, phi, Subspace::span({phi}, 2)));
  EXPECT_THROW(knows_either_or(incompatible, Vector(2), coords(2, {0})), ZeroVector);
}

TEST(KnowsEitherOr, SingleFamilyCoincidesWithKnows) {
  testing::Gen gen(29);
  for (int k = 0; k < 60; ++k) {
    const std::size_t d = gen.uniform(1, 6);
    const SpectralFamily f = gen.family(d);
    const Vector psi = gen.nonzero_vector(d);
    const Subspace ev = gen.event_for({f}, d);
    ASSERT_EQ(knows_either_or(std::vector<SpectralFamily>{f}, psi, ev), knows(f, psi, ev));
  }
}

}  // namespace
}  // namespace qknow

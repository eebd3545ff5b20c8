#include <gtest/gtest.h>

#include "mangavec/mangavec.hpp"
#include "support/oracles.hpp"

using namespace mangavec;

namespace {

PlacedStroke stroke(const Action& a, int size) { return {Placement{}, action_to_vector(a, {0, 0, size, size})}; }

double doc_error(const VectorDoc& doc, const Canvas& target) {
  return squared_error(rasterize_doc(doc, target.width(), target.height()), target) /
         static_cast<double>(target.size());
}

}  // namespace

TEST(Prune, CoveredStrokeIsRemoved) {
  const int size = 32;
  // Stroke 0 is a thin line fully inside the fat stroke 2 of the same gray.
  const Action thin{0.3, 0.5, 0.5, 0.5, 0.7, 0.5, 0.0, 0.0, 0.0};
  const Action other{0.1, 0.1, 0.15, 0.1, 0.2, 0.1, 0.0, 0.0, 0.5};
  const Action fat{0.3, 0.5, 0.5, 0.5, 0.7, 0.5, 0.4, 0.4, 0.0};
  const VectorDoc doc{size, size, {stroke(thin, size), stroke(other, size), stroke(fat, size)}};
  const Canvas target = rasterize_doc(doc, size, size);
  const auto [out, rep] = prune(doc, target, {0.0, size, size});
  EXPECT_EQ(rep.kept, (std::vector<int>{1, 2}));
  EXPECT_EQ(rep.neutral_removed, 1);
  EXPECT_EQ(rep.error_removed, 0);
  EXPECT_EQ(rep.delta_before, 0.0);
  EXPECT_EQ(rep.delta_after, 0.0);
}

TEST(Prune, DisjointUsefulStrokesSurvive) {
  const int size = 48;
  VectorDoc doc{size, size, {}};
  for (int i = 0; i < 4; ++i) {
    const double y = 0.15 + 0.22 * i;
    doc.strokes.push_back(stroke(Action{0.1, y, 0.5, y, 0.9, y, 0.05, 0.05, 0.1 * i}, size));
  }
  const Canvas target = rasterize_doc(doc, size, size);
  const auto [out, rep] = prune(doc, target, {0.0, size, size});
  EXPECT_EQ(rep.removed, 0);
  EXPECT_EQ(out.strokes.size(), doc.strokes.size());
}

TEST(Prune, ErrorStrokeCountsAsErrorRemoval) {
  const int size = 32;
  const Canvas target = blank_canvas(size, size);
  const VectorDoc doc{size, size, {stroke(Action{0.2, 0.2, 0.5, 0.5, 0.8, 0.8, 0.2, 0.2, 0.0}, size)}};
  const auto [out, rep] = prune(doc, target, {0.0, size, size});
  EXPECT_EQ(rep.error_removed, 1);
  EXPECT_TRUE(out.strokes.empty());
  EXPECT_EQ(rep.delta_after, 0.0);
}

TEST(Prune, InvariantsOnRandomDocs) {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const int size = 24 + 8 * (trial % 3);
    const Canvas target = oracle::random_canvas(rng, size, size);
    VectorDoc doc{size, size, {}};
    const int n = 1 + static_cast<int>(rng.uniform() * 25);
    for (int i = 0; i < n; ++i) {
      Action a = oracle::random_action(rng);
      a.r0 *= 0.4;
      a.r2 *= 0.4;
      doc.strokes.push_back(stroke(a, size));
    }
    const double xi = trial % 2 ? 0.0 : 1e-3;
    const auto [out, rep] = prune(doc, target, {xi, size, size});

    // Tested once each, last to first.
    ASSERT_EQ(rep.test_order.size(), static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ASSERT_EQ(rep.test_order[i], n - 1 - i);
    // Output is the kept subsequence, in order.
    ASSERT_EQ(out.strokes.size(), rep.kept.size());
    for (std::size_t i = 0; i < rep.kept.size(); ++i) {
      if (i) ASSERT_LT(rep.kept[i - 1], rep.kept[i]);
      ASSERT_EQ(serialize_svg(VectorDoc{size, size, {out.strokes[i]}}),
                serialize_svg(VectorDoc{size, size, {doc.strokes[rep.kept[i]]}}));
    }
    ASSERT_EQ(rep.removed + static_cast<int>(rep.kept.size()), n);
    ASSERT_EQ(rep.removed, rep.error_removed + rep.neutral_removed);
    // Ledger.
    ASSERT_LE(rep.delta_after, rep.delta_before + xi * rep.removed + 1e-15);
    // The reported errors are the real raster errors.
    ASSERT_NEAR(rep.delta_before, doc_error(doc, target), 1e-12);
    ASSERT_NEAR(rep.delta_after, doc_error(out, target), 1e-12);
    ASSERT_LE(rep.bytes_after, rep.bytes_before);
    ASSERT_EQ(rep.bytes_after, doc_size_bytes(out));
  }
}

TEST(Prune, ReplicatesReferenceLoop) {
  // Straight re-implementation of the loop on full rasterizations.
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int size = 24;
    const Canvas target = oracle::random_canvas(rng, size, size);
    VectorDoc doc{size, size, {}};
    for (int i = 0; i < 12; ++i) doc.strokes.push_back(stroke(oracle::random_action(rng), size));
    const double xi = 2e-3;
    std::vector<char> keep(doc.strokes.size(), 1);
    auto subset = [&] {
      VectorDoc d{size, size, {}};
      for (std::size_t i = 0; i < keep.size(); ++i)
        if (keep[i]) d.strokes.push_back(doc.strokes[i]);
      return d;
    };
    double delta = doc_error(doc, target);
    for (std::size_t t = keep.size(); t-- > 0;) {
      keep[t] = 0;
      const double trial_delta = doc_error(subset(), target);
      if (trial_delta <= delta + xi) delta = trial_delta;
      else keep[t] = 1;
    }
    const auto [out, rep] = prune(doc, target, {xi, size, size});
    EXPECT_EQ(serialize_svg(out), serialize_svg(subset()));
    EXPECT_NEAR(rep.delta_after, delta, 1e-12);
  }
}

TEST(Prune, RejectsBadConfig) {
  const Canvas t = blank_canvas(16, 16);
  EXPECT_THROW(prune(VectorDoc{16, 16, {}}, t, {-1.0, 16, 16}), std::invalid_argument);
  EXPECT_THROW(prune(VectorDoc{16, 16, {}}, t, {0.0, 8, 16}), shape_error);
}

#pragma once

// Hand-built records and corpora shared by unit and acceptance tests.

#include <cstddef>
#include <string>
#include <vector>

#include "jnr/types.hpp"

namespace jnr::testing {

/// Distribution with `mass` on `target` and the remainder on `other`
/// (or spread uniformly over the other ten characters when other < 0).
CharDist Dist(std::size_t target, double mass = 1.0, int other = -1);

/// A valid record whose predicted string and confidence follow the dists.
FramePrediction Frame(const std::string& id, std::uint64_t idx, const CharDist& first, const CharDist& second,
                      double legibility = 0.9);

/// A valid record showing `number` with near point-mass distributions.
FramePrediction NumberFrame(const std::string& id, std::uint64_t idx, int number, double confidence,
                            double legibility = 0.9);

Tracklet MakeTracklet(const std::string& id, std::vector<FramePrediction> frames);

/// Corpus on which subject-filter grid search over the default grid has a
/// unique best region {K >= 3, N = 3.5}; the geometry is described in fixtures.cpp.
std::vector<Tracklet> PlantedGridCorpus(std::size_t per_type = 20);

}  // namespace jnr::testing

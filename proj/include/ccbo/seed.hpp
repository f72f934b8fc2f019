#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ccbo {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t z);

/// Derives an independent child seed from a parent seed and a path of tags.
///
/// Seeds in a study form a tree: master -> repetition -> iteration -> purpose.
/// Every node is obtained by folding its path into the parent with mix64, so
/// sibling streams never share state and adding a new consumer does not shift
/// the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

/// Purpose tags used in seed paths.
enum class Stream : std::uint64_t {
  kDoe = 1,
  kDoeU = 2,
  kCandidatesX = 3,
  kCandidatesU = 4,
  kTraining = 5,
  kQuadrature = 6,
  kTrajectories = 7,
  kImprovement = 8,
  kMvn = 9,
  kReporting = 10,
  kIteration = 11,
};

inline std::uint64_t tag(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace ccbo

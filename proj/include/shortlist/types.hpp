#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace shortlist {

/// Candidates are identified by their position in the candidate list.
/// Display names are metadata kept on the election only.
using CandidateId = int;

/// Scores, utilities and evaluation values. 64-bit so that sums of
/// binary-encoded utilities do not overflow at any size we accept.
using Value = std::int64_t;

/// A strict linear order over all candidates, most preferred first.
struct Ballot {
  std::vector<CandidateId> order;
};

/// A ballot together with its multiplicity in the vote multiset.
struct WeightedBallot {
  Ballot ballot;
  int count = 1;
};

struct Election {
  int num_candidates = 0;
  std::vector<std::string> candidate_names;
  std::vector<WeightedBallot> ballots;

  int num_votes() const {
    int n = 0;
    for (const auto& wb : ballots) n += wb.count;
    return n;
  }

  /// Throws std::invalid_argument when a ballot is not a permutation of
  /// all candidates or a count is not positive. The message names the
  /// offending ballot index.
  void validate() const;
};

struct ScoreVector {
  std::vector<Value> scores;
};

/// The (confirmed, pending, rejected) split of the candidates induced by
/// the scores and the egroup size: in all / in some / in no co-winning
/// size-k set of maximum total score. Each list is sorted ascending.
struct CandidatePartition {
  std::vector<CandidateId> confirmed;
  std::vector<CandidateId> pending;
  std::vector<CandidateId> rejected;
};

/// A size-k winning set, members sorted ascending.
struct Egroup {
  std::vector<CandidateId> members;

  friend bool operator==(const Egroup&, const Egroup&) = default;
};

struct InfeasibleDemandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedVariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidProgramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an ILP reconstruction disagrees with re-simulation.
/// Must never fire on a correct build; exercised by tests.
struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace shortlist

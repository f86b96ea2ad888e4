#pragma once

#include "bitret/core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace bitret {

struct DifferenceSetInstance {
  int n = 0;
  int k = 0;
  // Nonzero differences of D - D, sorted, with multiplicity.
  std::vector<int> g;
  double mu = 0;

  void validate() const;
};

DifferenceSetInstance build_difference_instance(const BitSequence& b);
DifferenceSetInstance build_difference_instance(int n, const std::vector<int>& support);
// Recovers (n, K, G) from a sign autocorrelation with bits 1 <-> signs -1:
// K = (n - sqrt(sum a)) / 2, the sparser of the two complements, and each
// k != 0 occurs (a_k - n + 4K) / 4 times in G. Throws std::invalid_argument
// when the counts are not non-negative integers.
DifferenceSetInstance difference_instance_from_autocorrelation(const Autocorrelation& a);

enum class BacktrackStatus { Solved, Insoluble, BudgetExhausted };

struct BacktrackProfile {
  // Index k holds the number of successful proposals that produced a set of
  // size k; entry 1 is the fixed element 0.
  std::vector<std::uint64_t> nodes_per_depth;
  std::vector<std::uint64_t> proposals_per_depth;
  std::uint64_t proposals_total = 0;
  BacktrackStatus status = BacktrackStatus::Insoluble;
  std::optional<std::vector<int>> solution_d;

  bool solved() const { return status == BacktrackStatus::Solved; }
};

inline constexpr std::uint64_t kDefaultProposalBudget = 1'000'000'000ULL;

// Depth-first reconstruction of D from G with 0 fixed in D. Candidates are
// proposed in ascending order above the last member; a proposal succeeds when
// all signed differences to the current members are still unclaimed.
BacktrackProfile backtrack_solve(const DifferenceSetInstance& instance,
                                 std::uint64_t budget = kDefaultProposalBudget);

struct MultiplicityStats {
  // histogram[c] = number of differences d in 1..n-1 occurring c times.
  std::vector<std::uint64_t> histogram;
  double zero_fraction = 0;
  double poisson_zero = 0;  // exp(-mu)
};

MultiplicityStats multiplicity_stats(const DifferenceSetInstance& instance);

// True when d2 = +-d1 + r (mod n) for some r.
bool same_difference_orbit(const std::vector<int>& d1, const std::vector<int>& d2, int n);

std::string to_string(BacktrackStatus status);

}  // namespace bitret

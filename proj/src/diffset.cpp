#include "bitret/diffset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bitret {

void DifferenceSetInstance::validate() const {
  if (n < 2 || k < 1 || k > n) throw std::invalid_argument("difference instance: need 1 <= k <= n");
  if (static_cast<long long>(g.size()) != static_cast<long long>(k) * (k - 1))
    throw std::invalid_argument("difference instance: |G| must equal K(K-1)");
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (int d : g) {
    if (d < 1 || d >= n) throw std::invalid_argument("difference instance: element outside 1..n-1");
    ++count[d];
  }
  for (int d = 1; d < n; ++d)
    if (count[d] != count[n - d]) throw std::invalid_argument("difference instance: G not closed under negation");
  if (!std::is_sorted(g.begin(), g.end())) throw std::invalid_argument("difference instance: G not sorted");
}

DifferenceSetInstance build_difference_instance(int n, const std::vector<int>& support) {
  DifferenceSetInstance inst;
  inst.n = n;
  inst.k = static_cast<int>(support.size());
  if (inst.k < 1) throw std::invalid_argument("build_difference_instance: need at least one element");
  inst.g.reserve(static_cast<std::size_t>(inst.k) * static_cast<std::size_t>(inst.k - 1));
  for (int a : support)
    for (int b : support)
      if (a != b) inst.g.push_back(((a - b) % n + n) % n);
  std::sort(inst.g.begin(), inst.g.end());
  inst.mu = static_cast<double>(inst.k) * (inst.k - 1) / (n - 1);
  return inst;
}

DifferenceSetInstance build_difference_instance(const BitSequence& b) {
  return build_difference_instance(b.size(), b.support());
}

DifferenceSetInstance difference_instance_from_autocorrelation(const Autocorrelation& a) {
  check_autocorrelation(a);
  const int n = static_cast<int>(a.size());
  const auto total = a.sum();
  auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(total))));
  while (root * root > total) --root;
  while ((root + 1) * (root + 1) <= total) ++root;
  if ((n - root) % 2 != 0) throw std::invalid_argument("difference_instance_from_autocorrelation: parity mismatch");
  DifferenceSetInstance inst;
  inst.n = n;
  inst.k = static_cast<int>((n - root) / 2);
  if (inst.k < 1) throw std::invalid_argument("difference_instance_from_autocorrelation: no ones to place");
  for (int d = 1; d < n; ++d) {
    const std::int64_t num = a[d] - n + 4 * static_cast<std::int64_t>(inst.k);
    if (num < 0 || num % 4 != 0)
      throw std::invalid_argument("difference_instance_from_autocorrelation: invalid multiplicity at k=" +
                                  std::to_string(d));
    inst.g.insert(inst.g.end(), static_cast<std::size_t>(num / 4), d);
  }
  inst.mu = static_cast<double>(inst.k) * (inst.k - 1) / (n - 1);
  inst.validate();
  return inst;
}

namespace {

struct Search {
  int n;
  int k;
  std::uint64_t budget;
  std::vector<int> count;
  std::vector<int> members;
  BacktrackProfile profile;
  bool exhausted = false;

  // Claims the 2(|members|) signed differences to v; rolls back on failure.
  bool claim(int v, std::vector<int>& claimed) {
    for (int m : members) {
      for (int d : {v - m, m - v}) {
        d = (d % n + n) % n;
        if (count[d] == 0) {
          for (int c : claimed) ++count[c];
          claimed.clear();
          return false;
        }
        --count[d];
        claimed.push_back(d);
      }
    }
    return true;
  }

  bool descend(int start) {
    const int depth = static_cast<int>(members.size());
    if (depth == k) return true;
    std::vector<int> claimed;
    claimed.reserve(static_cast<std::size_t>(2 * depth));
    for (int v = start; v < n; ++v) {
      if (count[v] == 0) continue;
      if (profile.proposals_total == budget) {
        exhausted = true;
        return false;
      }
      ++profile.proposals_total;
      ++profile.proposals_per_depth[depth + 1];
      if (!claim(v, claimed)) continue;
      ++profile.nodes_per_depth[depth + 1];
      members.push_back(v);
      if (descend(v + 1)) return true;
      members.pop_back();
      for (int c : claimed) ++count[c];
      claimed.clear();
      if (exhausted) return false;
    }
    return false;
  }
};

}  // namespace

BacktrackProfile backtrack_solve(const DifferenceSetInstance& instance, std::uint64_t budget) {
  instance.validate();
  Search s{instance.n, instance.k, budget, std::vector<int>(static_cast<std::size_t>(instance.n), 0), {}, {}, false};
  for (int d : instance.g) ++s.count[d];
  s.profile.nodes_per_depth.assign(static_cast<std::size_t>(instance.k + 1), 0);
  s.profile.proposals_per_depth.assign(static_cast<std::size_t>(instance.k + 1), 0);
  s.members.push_back(0);
  s.profile.nodes_per_depth[1] = 1;
  const bool found = s.descend(1);
  if (found) {
    s.profile.status = BacktrackStatus::Solved;
    s.profile.solution_d = s.members;
  } else {
    s.profile.status = s.exhausted ? BacktrackStatus::BudgetExhausted : BacktrackStatus::Insoluble;
  }
  return s.profile;
}

MultiplicityStats multiplicity_stats(const DifferenceSetInstance& instance) {
  MultiplicityStats st;
  std::vector<int> count(static_cast<std::size_t>(instance.n), 0);
  for (int d : instance.g) ++count[d];
  int max_count = 0;
  for (int d = 1; d < instance.n; ++d) max_count = std::max(max_count, count[d]);
  st.histogram.assign(static_cast<std::size_t>(max_count + 1), 0);
  for (int d = 1; d < instance.n; ++d) ++st.histogram[count[d]];
  st.zero_fraction = static_cast<double>(st.histogram[0]) / (instance.n - 1);
  st.poisson_zero = std::exp(-instance.mu);
  return st;
}

bool same_difference_orbit(const std::vector<int>& d1, const std::vector<int>& d2, int n) {
  if (d1.size() != d2.size()) return false;
  if (d1.empty()) return true;
  const std::set<int> target(d2.begin(), d2.end());
  if (target.size() != d2.size()) return false;
  for (int sign : {1, -1}) {
    for (int x : d1) {
      const int r = ((*target.begin() - sign * x) % n + n) % n;
      bool all = true;
      for (int y : d1) {
        if (!target.count(((sign * y + r) % n + n) % n)) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
  }
  return false;
}

std::string to_string(BacktrackStatus status) {
  switch (status) {
    case BacktrackStatus::Solved: return "solved";
    case BacktrackStatus::Insoluble: return "insoluble";
    case BacktrackStatus::BudgetExhausted: return "budget_exhausted";
  }
  return "insoluble";
}

}  // namespace bitret

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "coldstandby/marginals.hpp"

namespace coldstandby {

/// Lifetimes of the cold-standby spares: one law per slot (matched) or m
/// i.i.d. copies of one law (batch).
class RedundancyModel {
 public:
  static RedundancyModel matched(std::vector<Distribution> laws);
  static RedundancyModel batch(Distribution law, std::size_t m);

  bool is_matched() const { return matched_; }
  /// Number of spare lifetimes drawn per replication.
  std::size_t count() const { return matched_ ? laws_.size() : m_; }
  /// Law of the i-th spare draw.
  const Distribution& law(std::size_t i) const { return matched_ ? laws_[i] : laws_.front(); }
  const std::vector<Distribution>& laws() const { return laws_; }

 private:
  RedundancyModel(bool matched, std::vector<Distribution> laws, std::size_t m)
      : matched_(matched), laws_(std::move(laws)), m_(m) {}

  bool matched_;
  std::vector<Distribution> laws_;
  std::size_t m_;
};

/// Either a matching (node i receives spare perm[i], 0-based) or a count
/// vector (node i receives r[i] spares, assigned in contiguous blocks).
class AllocationPolicy {
 public:
  /// Throws std::invalid_argument unless perm is a permutation of 0..n-1.
  static AllocationPolicy matching(std::vector<std::size_t> perm);
  static AllocationPolicy counts(std::vector<std::size_t> r);

  bool is_matching() const { return matching_; }
  const std::vector<std::size_t>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  /// Sum of counts; n for a matching.
  std::size_t total() const;
  /// 1-based tuple text, e.g. "(2,1,3)" or "(3,2)".
  std::string label() const;

  friend bool operator==(const AllocationPolicy&, const AllocationPolicy&) = default;

 private:
  AllocationPolicy(bool matching, std::vector<std::size_t> values) : matching_(matching), values_(std::move(values)) {}

  bool matching_;
  std::vector<std::size_t> values_;
};

/// Swaps entries i and j (0-based, i < j < size). Throws std::out_of_range.
AllocationPolicy transpose(const AllocationPolicy& p, std::size_t i, std::size_t j);

/// All count vectors of length n summing to m, in descending lexicographic
/// order: (m,0,...,0) first, (0,...,0,m) last.
std::vector<AllocationPolicy> enumerate_policies(std::size_t n, std::size_t m);

class Topology {
 public:
  enum class Kind { series, parallel, k_out_of_n };

  static Topology series() { return Topology(Kind::series, 0); }
  static Topology parallel() { return Topology(Kind::parallel, 1); }
  static Topology k_out_of_n(std::size_t k);

  Kind kind() const { return kind_; }
  /// k for k-out-of-n; 0 for series (resolved to n), 1 for parallel.
  std::size_t k() const { return k_; }
  std::string describe() const;
  /// Throws ContractError when k > n.
  void validate(std::size_t n) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Topology(Kind kind, std::size_t k) : kind_(kind), k_(k) {}
  Kind kind_;
  std::size_t k_;
};

/// x_i + y_{perm[i]} for a matching; x_i + (sum of the i-th block of r_i
/// spares) for counts. Throws ContractError on dimension mismatch.
void node_lifetimes(std::span<const double> x, std::span<const double> y, const AllocationPolicy& p,
                    std::span<double> out);
std::vector<double> node_lifetimes(std::span<const double> x, std::span<const double> y, const AllocationPolicy& p);

/// Series -> min, parallel -> max, k-out-of-n -> (n-k+1)-th smallest.
double system_lifetime(const Topology& t, std::span<const double> nodes);
/// Same, but may reorder `nodes` instead of copying.
double system_lifetime_inplace(const Topology& t, std::span<double> nodes);

}  // namespace coldstandby

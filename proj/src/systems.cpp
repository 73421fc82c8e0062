#include "coldstandby/systems.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "coldstandby/errors.hpp"

namespace coldstandby {

RedundancyModel RedundancyModel::matched(std::vector<Distribution> laws) {
  if (laws.empty()) throw std::invalid_argument("matched redundancy needs at least one law");
  return RedundancyModel(true, std::move(laws), 0);
}

RedundancyModel RedundancyModel::batch(Distribution law, std::size_t m) {
  return RedundancyModel(false, {std::move(law)}, m);
}

AllocationPolicy AllocationPolicy::matching(std::vector<std::size_t> perm) {
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t v : perm) {
    if (v >= perm.size() || seen[v]) throw std::invalid_argument("matching must be a permutation");
    seen[v] = true;
  }
  return AllocationPolicy(true, std::move(perm));
}

AllocationPolicy AllocationPolicy::counts(std::vector<std::size_t> r) {
  if (r.empty()) throw std::invalid_argument("count policy must have at least one entry");
  return AllocationPolicy(false, std::move(r));
}

std::size_t AllocationPolicy::total() const {
  return matching_ ? values_.size() : std::accumulate(values_.begin(), values_.end(), std::size_t{0});
}

std::string AllocationPolicy::label() const {
  std::string s = "(";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(matching_ ? values_[i] + 1 : values_[i]);
  }
  return s + ")";
}

AllocationPolicy transpose(const AllocationPolicy& p, std::size_t i, std::size_t j) {
  if (!(i < j) || j >= p.size()) throw std::out_of_range("transposition indices must satisfy i < j < n");
  auto v = p.values();
  std::swap(v[i], v[j]);
  return p.is_matching() ? AllocationPolicy::matching(std::move(v)) : AllocationPolicy::counts(std::move(v));
}

std::vector<AllocationPolicy> enumerate_policies(std::size_t n, std::size_t m) {
  if (n == 0) throw std::invalid_argument("enumerate_policies needs n >= 1");
  std::vector<AllocationPolicy> out;
  std::vector<std::size_t> r(n, 0);
  // Depth-first, largest first entry first.
  auto fill = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == n) {
      r[pos] = left;
      out.push_back(AllocationPolicy::counts(r));
      return;
    }
    for (std::size_t v = left + 1; v-- > 0;) {
      r[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  fill(fill, 0, m);
  return out;
}

Topology Topology::k_out_of_n(std::size_t k) {
  if (k == 0) throw std::invalid_argument("k-out-of-n needs k >= 1");
  return Topology(Kind::k_out_of_n, k);
}

std::string Topology::describe() const {
  switch (kind_) {
    case Kind::series: return "series";
    case Kind::parallel: return "parallel";
    case Kind::k_out_of_n: return std::to_string(k_) + "-out-of-n";
  }
  return "?";
}

void Topology::validate(std::size_t n) const {
  if (n == 0) throw ContractError("system needs at least one node");
  if (kind_ == Kind::k_out_of_n && k_ > n) {
    throw ContractError("k-out-of-n with k=" + std::to_string(k_) + " exceeds n=" + std::to_string(n));
  }
}

void node_lifetimes(std::span<const double> x, std::span<const double> y, const AllocationPolicy& p,
                    std::span<double> out) {
  const std::size_t n = x.size();
  if (p.size() != n || out.size() != n) throw ContractError("policy and node dimensions differ");
  if (p.is_matching()) {
    if (y.size() != n) throw ContractError("matching needs one spare per node");
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] + y[p.values()[i]];
    return;
  }
  if (y.size() != p.total()) throw ContractError("count policy total differs from the number of spares");
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = 0.0;
    for (std::size_t c = 0; c < p.values()[i]; ++c) z += y[next++];
    out[i] = x[i] + z;
  }
}

std::vector<double> node_lifetimes(std::span<const double> x, std::span<const double> y, const AllocationPolicy& p) {
  std::vector<double> out(x.size());
  node_lifetimes(x, y, p, out);
  return out;
}

double system_lifetime_inplace(const Topology& t, std::span<double> nodes) {
  t.validate(nodes.size());
  switch (t.kind()) {
    case Topology::Kind::series: return *std::min_element(nodes.begin(), nodes.end());
    case Topology::Kind::parallel: return *std::max_element(nodes.begin(), nodes.end());
    case Topology::Kind::k_out_of_n: {
      const auto nth = nodes.begin() + static_cast<std::ptrdiff_t>(nodes.size() - t.k());
      std::nth_element(nodes.begin(), nth, nodes.end());
      return *nth;
    }
  }
  return 0.0;
}

double system_lifetime(const Topology& t, std::span<const double> nodes) {
  std::vector<double> copy(nodes.begin(), nodes.end());
  return system_lifetime_inplace(t, copy);
}

}  // namespace coldstandby

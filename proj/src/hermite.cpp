#include "wdens/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace wdens {

double hermite_eval(int k, double x) {
  if (k < 0) throw invalid_parameter_error("hermite_eval: degree must be >= 0");
  if (!std::isfinite(x)) throw invalid_parameter_error("hermite_eval: x must be finite");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = (x * cur - std::sqrt(static_cast<double>(j)) * prev) /
                        std::sqrt(static_cast<double>(j + 1));
    prev = cur;
    cur = next;
  }
  return cur;
}

std::uint64_t simplex_count(int m, int K) {
  if (m < 1 || K < 0) throw invalid_parameter_error("simplex_count: need m >= 1, K >= 0");
  // C(K+m, K) with 128-bit intermediates; the ratio after each step is exact.
  unsigned __int128 c = 1;
  for (int i = 1; i <= K; ++i) {
    c = c * static_cast<unsigned>(m + i);
    c /= static_cast<unsigned>(i);
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw capacity_error("simplex_count: C(K+m,K) exceeds 64-bit range for m=" +
                               std::to_string(m) + ", K=" + std::to_string(K),
                           std::numeric_limits<std::uint64_t>::max());
  }
  return static_cast<std::uint64_t>(c);
}

std::uint64_t dn_index_count(int K) {
  if (K < 0) throw invalid_parameter_error("dn_index_count: K must be >= 0");
  unsigned __int128 c = 1;
  for (int i = 0; i < K; ++i) {
    c *= static_cast<unsigned>(K + 1);
    if (c > std::numeric_limits<std::uint64_t>::max())
      throw capacity_error("dn_index_count: (K+1)^K exceeds 64-bit range for K=" +
                               std::to_string(K),
                           std::numeric_limits<std::uint64_t>::max());
  }
  return static_cast<std::uint64_t>(c);
}

void IndexSet::push(const std::vector<int>& entries) {
  int deg = 0, last = 0, maxe = 0;
  for (std::size_t c = 0; c < entries.size(); ++c) {
    if (entries[c] != 0) {
      pairs_.push_back(static_cast<int>(c));
      pairs_.push_back(entries[c]);
      deg += entries[c];
      last = static_cast<int>(c) + 1;
      if (entries[c] > maxe) maxe = entries[c];
    }
  }
  offsets_.push_back(pairs_.size() / 2);
  degrees_.push_back(deg);
  last_coord_.push_back(last);
  max_entry_.push_back(maxe);
  if (maxe > max_entry_bound_) max_entry_bound_ = maxe;
}

namespace {

// Lexicographically ascending tuples of length m with the given sum and an
// optional per-entry bound.
template <typename Emit>
void compositions(int m, int sum, int entry_bound, std::vector<int>& buf, int pos,
                  const Emit& emit) {
  if (pos == m - 1) {
    if (entry_bound >= 0 && sum > entry_bound) return;
    buf[pos] = sum;
    emit(buf);
    return;
  }
  const int hi = entry_bound >= 0 ? std::min(sum, entry_bound) : sum;
  const int lo =
      entry_bound >= 0 ? std::max(0, sum - entry_bound * (m - 1 - pos)) : 0;
  for (int v = lo; v <= hi; ++v) {
    buf[pos] = v;
    compositions(m, sum - v, entry_bound, buf, pos + 1, emit);
  }
}

}  // namespace

IndexSet IndexSet::simplex(int m, int K) {
  const std::uint64_t count = simplex_count(m, K);
  IndexSet set(m, K);
  set.pairs_.reserve(2 * count);  // upper bound is loose; fine for supported sizes
  std::vector<int> buf(m, 0);
  for (int d = 0; d <= K; ++d)
    compositions(m, d, -1, buf, 0, [&set](const std::vector<int>& e) { set.push(e); });
  return set;
}

IndexSet IndexSet::dn_box(int K) {
  if (K < 0) throw invalid_parameter_error("dn_box: K must be >= 0");
  dn_index_count(K);
  if (K == 0) {
    IndexSet set(1, 0);
    set.push({0});
    return set;
  }
  IndexSet set(K, K * K);
  std::vector<int> buf(K, 0);
  for (int d = 0; d <= K * K; ++d)
    compositions(K, d, K, buf, 0, [&set](const std::vector<int>& e) { set.push(e); });
  return set;
}

MultiIndex IndexSet::at(std::size_t i) const {
  MultiIndex idx;
  idx.entries.assign(m_, 0);
  for (const int* q = pairs_begin(i); q != pairs_end(i); q += 2) idx.entries[q[0]] = q[1];
  return idx;
}

std::vector<MultiIndex> enumerate_simplex(int m, int K) {
  const IndexSet set = IndexSet::simplex(m, K);
  std::vector<MultiIndex> out;
  out.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) out.push_back(set.at(i));
  return out;
}

HermiteTable::HermiteTable(const std::vector<double>& points, std::size_t n_points, int m,
                           int K)
    : n_points_(n_points), m_(m), max_degree_(K) {
  if (m < 1 || K < 0) throw invalid_parameter_error("HermiteTable: need m >= 1, K >= 0");
  if (points.size() != n_points * static_cast<std::size_t>(m))
    throw invalid_parameter_error("HermiteTable: point array size mismatch");
  std::vector<double> sqrt_k(K + 2);
  for (int k = 0; k <= K + 1; ++k) sqrt_k[k] = std::sqrt(static_cast<double>(k));

  values_.resize(n_points * m * (K + 1));
  for (std::size_t p = 0; p < n_points; ++p) {
    for (int c = 0; c < m; ++c) {
      const double x = points[p * m + c];
      double* h = values_.data() + (p * m + c) * (K + 1);
      h[0] = 1.0;
      if (K >= 1) h[1] = x;
      for (int k = 1; k < K; ++k) h[k + 1] = (x * h[k] - sqrt_k[k] * h[k - 1]) / sqrt_k[k + 1];
    }
  }
}

double tensor_eval(const MultiIndex& idx, const std::vector<double>& x) {
  if (idx.entries.size() != x.size())
    throw invalid_parameter_error("tensor_eval: index and point lengths differ");
  int K = 0;
  for (int e : idx.entries) K = std::max(K, e);
  HermiteTable table(x, 1, static_cast<int>(x.size()), K);
  double v = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) v *= table.value(0, static_cast<int>(j), idx.entries[j]);
  return v;
}

}  // namespace wdens

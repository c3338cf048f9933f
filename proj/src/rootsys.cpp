#include "dunkl/rootsys.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <numeric>
#include <sstream>

namespace dunkl {

RootSystemA::RootSystemA(int rank, double k, int dim, std::vector<int> active)
    : rank_(rank), k_(k), active_(std::move(active)) {
  if (rank < 1) throw DomainError("root system rank must be positive");
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("multiplicity k must be > 0");
  dim_ = dim < 0 ? rank + 1 : dim;
  if (dim_ < rank + 1) throw DomainError("ambient dimension must be >= rank + 1");
  storage_ = dim_;
  if (active_.empty()) {
    active_.resize(rank + 1);
    std::iota(active_.begin(), active_.end(), 0);
  }
  if (static_cast<int>(active_.size()) != rank + 1)
    throw DomainError("active_coords must list rank + 1 indices");
  std::vector<int> sorted = active_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0 ||
      sorted.back() >= dim_)
    throw DomainError("active_coords must be distinct indices in [0, d)");
  for (int c = 0; c < dim_; ++c)
    if (!std::binary_search(sorted.begin(), sorted.end(), c)) inactive_.push_back(c);
  build_roots();
}

RootSystemA RootSystemA::trace_zero(int rank, double k) {
  RootSystemA rs(rank, k);
  rs.trace_zero_ = true;
  rs.dim_ = rank;
  rs.storage_ = rank + 1;
  return rs;
}

RootSystemA RootSystemA::with_k(double k) const {
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("multiplicity k must be > 0");
  RootSystemA out = *this;
  out.k_ = k;
  return out;
}

double RootSystemA::weyl_order() const { return std::tgamma(rank_ + 2.0); }

void RootSystemA::build_roots() {
  roots_.clear();
  for (int a = 0; a <= rank_; ++a)
    for (int b = a + 1; b <= rank_; ++b) roots_.push_back({active_[a], active_[b]});
}

Vector active_part(const RootSystemA& rs, const Vector& p) {
  Vector out(rs.rank() + 1);
  for (int a = 0; a <= rs.rank(); ++a) out(a) = p(rs.active()[a]);
  return out;
}

bool in_chamber(const RootSystemA& rs, const Vector& p, bool strict, double tol) {
  if (p.size() != rs.storage_size()) return false;
  const auto& act = rs.active();
  for (int a = 0; a < rs.rank(); ++a) {
    const double gap = p(act[a]) - p(act[a + 1]);
    if (strict ? !(gap > tol) : !(gap >= -tol)) return false;
  }
  return true;
}

Vector sort_into_chamber(const RootSystemA& rs, const Vector& p) {
  Vector act = active_part(rs, p);
  std::sort(act.data(), act.data() + act.size(), std::greater<>());
  Vector out = p;
  for (int a = 0; a <= rs.rank(); ++a) out(rs.active()[a]) = act(a);
  return out;
}

ChamberPoint::ChamberPoint(const RootSystemA& rs, Vector p) : p_(std::move(p)) {
  if (p_.size() != rs.storage_size())
    throw DomainError("point has " + std::to_string(p_.size()) + " coordinates, expected " +
                      std::to_string(rs.storage_size()));
  if (!p_.allFinite()) throw DomainError("point has non-finite coordinates");
  if (!in_chamber(rs, p_)) throw DomainError("point is outside the closed positive Weyl chamber");
  if (rs.is_trace_zero() && std::abs(p_.sum()) > 1e-12 * std::max(1.0, p_.norm()))
    throw DomainError("trace-zero realization requires coordinates summing to 0");
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0.0;
    const char* first = item.data();
    const char* last = item.data() + item.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
      throw DomainError("malformed vector component '" + item + "' in '" + text + "'");
    values.push_back(v);
    pos = comma + 1;
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace dunkl

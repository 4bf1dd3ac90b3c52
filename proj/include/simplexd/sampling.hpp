#pragma once

#include "linalg.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace simplexd {

/// One direction column added to the point of interest.
struct Term {
  std::string label;
  Vector dir;
};

using Terms = std::vector<Term>;

/// x0 plus the sum of the term directions. Directions are summed first, in
/// lexicographic order of their coordinates, so that the same multiset of
/// directions always yields the same bits (and s + (-s) yields exactly x0).
inline Vector point_from_terms(const Vector& x0, const Terms& terms) {
  if (terms.empty()) return x0;
  std::vector<const Term*> order;
  order.reserve(terms.size());
  for (const auto& t : terms) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const Term* a, const Term* b) {
    if (std::lexicographical_compare(a->dir.begin(), a->dir.end(), b->dir.begin(), b->dir.end())) return true;
    if (std::lexicographical_compare(b->dir.begin(), b->dir.end(), a->dir.begin(), a->dir.end())) return false;
    return a->label < b->label;
  });
  Vector offset = order.front()->dir;
  for (std::size_t i = 1; i < order.size(); ++i) offset += order[i]->dir;
  return x0 + offset;
}

inline std::string provenance(const Terms& terms) {
  std::vector<std::string> labels;
  for (const auto& t : terms) labels.push_back(t.label);
  std::sort(labels.begin(), labels.end());
  std::string out = "x0";
  for (const auto& l : labels) out += " + " + l;
  return out;
}

/// Bitwise identity of a coordinate vector (-0.0 folded onto +0.0).
struct PointKey {
  std::vector<std::uint64_t> bits;

  explicit PointKey(const Vector& x) : bits(static_cast<std::size_t>(x.size())) {
    for (Index i = 0; i < x.size(); ++i) bits[static_cast<std::size_t>(i)] = std::bit_cast<std::uint64_t>(x(i) + 0.0);
  }
  friend bool operator==(const PointKey&, const PointKey&) = default;
  friend auto operator<=>(const PointKey&, const PointKey&) = default;
};

struct PointKeyHash {
  std::size_t operator()(const PointKey& k) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto b : k.bits) {
      h ^= b + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

inline std::string format_point(const Vector& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << ")";
  return os.str();
}

class MissingEvaluation : public std::out_of_range {
 public:
  explicit MissingEvaluation(const Vector& x)
      : std::out_of_range("no function value cached for point " + format_point(x)) {}
};

class NonFiniteValue : public std::domain_error {
 public:
  NonFiniteValue(const Vector& x, double value)
      : std::domain_error("objective returned " + std::to_string(value) + " at point " + format_point(x)) {}
};

/// Memo of black-box values keyed by exact point bits. Distinct keys may be
/// inserted concurrently; a key is written at most once.
class EvalCache {
 public:
  EvalCache() = default;
  EvalCache(const EvalCache&) = delete;
  EvalCache& operator=(const EvalCache&) = delete;

  std::optional<double> find(const Vector& x) const {
    std::shared_lock lock(mutex_);
    auto it = values_.find(PointKey(x));
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  /// Value at x, or MissingEvaluation.
  double at(const Vector& x) const {
    auto v = find(x);
    if (!v) throw MissingEvaluation(x);
    return *v;
  }

  /// Stores a value unless the key is already present. Returns true on insert.
  bool insert(const Vector& x, double value) {
    std::unique_lock lock(mutex_);
    return values_.emplace(PointKey(x), value).second;
  }

  /// Cached value, calling f on a miss.
  template <typename F>
  double get_or_evaluate(F&& f, const Vector& x) {
    if (auto v = find(x)) {
      ++hits_;
      return *v;
    }
    const double value = f(x);
    if (!std::isfinite(value)) throw NonFiniteValue(x, value);
    std::unique_lock lock(mutex_);
    auto [it, inserted] = values_.emplace(PointKey(x), value);
    if (inserted)
      ++misses_;
    else
      ++hits_;
    return it->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
  }
  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<PointKey, double, PointKeyHash> values_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

/// Function values at x0 + (sum of terms). Estimators read every sample
/// through this interface.
class PointValues {
 public:
  explicit PointValues(Vector x0) : x0_(std::move(x0)) {
    require(x0_.size() >= 1 && x0_.allFinite(), "x0 must be a nonempty finite vector");
  }
  virtual ~PointValues() = default;
  const Vector& x0() const { return x0_; }
  Index dim() const { return x0_.size(); }
  virtual double value(const Terms& terms) const = 0;

 private:
  Vector x0_;
};

/// Reads a fully populated cache; a missing point is an error.
class CachedValues final : public PointValues {
 public:
  CachedValues(Vector x0, const EvalCache& cache) : PointValues(std::move(x0)), cache_(cache) {}
  double value(const Terms& terms) const override { return cache_.at(point_from_terms(x0(), terms)); }

 private:
  const EvalCache& cache_;
};

/// Evaluates the objective on demand, memoized in a cache.
template <typename F>
class LiveValues final : public PointValues {
 public:
  LiveValues(F f, Vector x0, EvalCache& cache) : PointValues(std::move(x0)), f_(std::move(f)), cache_(cache) {}
  double value(const Terms& terms) const override {
    return cache_.get_or_evaluate(f_, point_from_terms(x0(), terms));
  }

 private:
  F f_;
  EvalCache& cache_;
};

struct SamplePoint {
  Vector coords;
  // Every symbolic route that produced this point, sorted; front() is canonical.
  std::vector<std::string> provenances;
};

/// Deduplicated evaluation points of one estimator call, ordered by canonical
/// provenance.
struct SamplePlan {
  std::string scheme;
  std::vector<SamplePoint> points;

  std::size_t count() const { return points.size(); }
};

/// Records every point an estimator reads; returns zero for each value.
class RecordingValues final : public PointValues {
 public:
  using PointValues::PointValues;

  double value(const Terms& terms) const override {
    Vector x = point_from_terms(x0(), terms);
    PointKey key(x);
    auto [it, inserted] = seen_.try_emplace(std::move(key), SamplePoint{x, {}});
    auto& provs = it->second.provenances;
    std::string p = provenance(terms);
    if (std::find(provs.begin(), provs.end(), p) == provs.end()) provs.push_back(std::move(p));
    return 0.0;
  }

  SamplePlan plan(std::string scheme) const {
    SamplePlan out{std::move(scheme), {}};
    for (const auto& [key, point] : seen_) {
      SamplePoint p = point;
      std::sort(p.provenances.begin(), p.provenances.end());
      out.points.push_back(std::move(p));
    }
    std::sort(out.points.begin(), out.points.end(), [](const SamplePoint& a, const SamplePoint& b) {
      if (a.provenances.front() != b.provenances.front()) return a.provenances.front() < b.provenances.front();
      return PointKey(a.coords) < PointKey(b.coords);
    });
    return out;
  }

 private:
  mutable std::map<PointKey, SamplePoint> seen_;
};

/// Fills the cache with f at every plan point. Points are split across
/// `threads` workers; values are keyed so the result does not depend on
/// arrival order. Returns the number of new evaluations.
template <typename F>
std::size_t evaluate(F&& f, const SamplePlan& plan, EvalCache& cache, unsigned threads = 1) {
  const std::size_t before = cache.misses();
  const std::size_t total = plan.points.size();
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(total ? total : 1)));
  if (threads == 1) {
    for (const auto& p : plan.points) cache.get_or_evaluate(f, p.coords);
    return cache.misses() - before;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < total; i += threads) cache.get_or_evaluate(f, plan.points[i].coords);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return cache.misses() - before;
}

}  // namespace simplexd

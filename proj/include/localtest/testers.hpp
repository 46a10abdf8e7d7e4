#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "localtest/array.hpp"
#include "localtest/grid.hpp"
#include "localtest/inference.hpp"
#include "localtest/property.hpp"
#include "localtest/rng.hpp"

namespace localtest {

enum class Algo { kSimple, kCanonical, kPot, kAmplifiedPot };

inline const char* algo_name(Algo a) {
  switch (a) {
    case Algo::kSimple: return "simple";
    case Algo::kCanonical: return "canonical";
    case Algo::kPot: return "pot";
    case Algo::kAmplifiedPot: return "amplified_pot";
  }
  return "?";
}

inline Algo algo_from_name(const std::string& s) {
  if (s == "simple") return Algo::kSimple;
  if (s == "canonical") return Algo::kCanonical;
  if (s == "pot") return Algo::kPot;
  if (s == "amplified_pot" || s == "amplified") return Algo::kAmplifiedPot;
  throw std::invalid_argument("unknown algo: " + s);
}

enum class RejectReason { kForbiddenWindow, kUnrepairable };

struct Evidence {
  int level = 0;
  BoxSpec box;                 // closure/interior of the offending block
  RejectReason reason = RejectReason::kForbiddenWindow;
  std::optional<Coord> window_loc;  // anchor of the forbidden window, when seen
};

struct Verdict {
  bool accept = true;
  std::optional<Evidence> evidence;
  QueryLog log;
};

struct TesterOptions {
  uint64_t infer_budget = kDefaultInferBudget;
};

namespace detail {

inline int64_t int_pow(int64_t base, int exp) {
  int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

template <class T>
Verdict full_query_verdict(const LocalProperty<T>& p, const Array<T>& a) {
  Verdict v;
  QueriedArray<T> qa(a);
  BoxSpec whole;
  whole.d = a.dim();
  for (int i = 0; i < a.dim(); ++i) {
    whole.lo[i] = whole.ilo[i] = 1;
    whole.hi[i] = whole.ihi[i] = a.width();
  }
  whole.for_each_closure_cell([&](const Coord& x) { qa.read(x); });
  auto bad = scan_box_for_forbidden(p, whole, [&](const Coord& x) { return qa.value(x); });
  if (bad) {
    v.accept = false;
    v.evidence = Evidence{0, whole, RejectReason::kForbiddenWindow, *bad};
  }
  v.log = qa.log();
  return v;
}

}  // namespace detail

// --- simple grid test ------------------------------------------------------

struct SimplePlan {
  bool full_query = false;
  int32_t w_target = 0;   // W in the analysis
  int32_t w = 0;          // chosen dyadic width
  int64_t block_samples = 0;
};

inline SimplePlan simple_plan(int32_t n, int d, int32_t k, double eps) {
  SimplePlan plan;
  double dd = d;
  bool k_small = static_cast<double>(k) <= std::pow(eps, 1.0 / dd) * n / 4.0;
  bool space_ok = std::pow(static_cast<double>(k), dd) / eps <= std::pow(static_cast<double>(n), dd) / 2.0;
  if (!k_small || !space_ok) {
    plan.full_query = true;
    return plan;
  }
  double w_target = std::floor(std::pow(n, dd / (dd + 1)) * std::pow(static_cast<double>(k), 1.0 / (dd + 1)) *
                               std::pow(eps, 1.0 / (dd + 1)));
  plan.w_target = static_cast<int32_t>(w_target);
  if (plan.w_target < k) {
    plan.full_query = true;
    return plan;
  }
  plan.block_samples = static_cast<int64_t>(std::ceil(2.0 / eps));
  return plan;
}

// Single-grid test: query one grid fully, decide unrepairability of
// every block from it, and additionally query ceil(2/eps) random blocks in
// full, rejecting on any forbidden window in their closures.
template <class T>
Verdict simple_test(const LocalProperty<T>& p, const Array<T>& a, double eps, Rng rng,
                    const TesterOptions& opts = {}) {
  if (a.dim() != p.d) throw std::invalid_argument("simple_test: dimension mismatch");
  if (eps <= 0 || eps > 1) throw std::invalid_argument("simple_test: eps must be in (0, 1]");
  const int32_t n = a.width();
  const int d = a.dim();
  if (n < p.k) throw std::invalid_argument("simple_test: n < k");

  SimplePlan plan = simple_plan(n, d, p.k, eps);
  if (plan.full_query) return detail::full_query_verdict(p, a);

  Grid grid = build_grid(n, d, p.k, plan.w_target);
  QueriedArray<T> qa(a);

  // 1. all grid entries
  const int32_t limitless = n;
  Coord x = Coord::filled(d, 1);
  for (;;) {
    if (grid.contains(x)) qa.read(x);
    int i = d - 1;
    for (; i >= 0; --i) {
      if (++x[i] <= limitless) break;
      x[i] = 1;
    }
    if (i < 0) break;
  }

  // 2. ceil(2/eps) uniformly random blocks, fully (with replacement)
  std::vector<Block> sampled;
  sampled.reserve(plan.block_samples);
  for (int64_t s = 0; s < plan.block_samples; ++s) {
    Block b = grid.block_at(static_cast<int64_t>(rng.below(grid.block_count())));
    sampled.push_back(b);
    grid.geometry(b).for_each_interior_cell([&](const Coord& c) { qa.read(c); });
  }

  auto value = [&](const Coord& c) { return qa.value(c); };
  Verdict v;

  // unrepairability of every block is determined by the grid values alone
  for (int64_t o = 0; o < grid.block_count() && v.accept; ++o) {
    BoxSpec box = grid.geometry(grid.block_at(o));
    if (!infer_block(p, box, value, opts.infer_budget, false).repairable) {
      v.accept = false;
      v.evidence = Evidence{1, box, RejectReason::kUnrepairable, std::nullopt};
    }
  }
  // forbidden windows inside the sampled closures
  for (const Block& b : sampled) {
    if (!v.accept) break;
    BoxSpec box = grid.geometry(b);
    if (auto bad = scan_box_for_forbidden(p, box, value)) {
      v.accept = false;
      v.evidence = Evidence{0, box, RejectReason::kForbiddenWindow, *bad};
    }
  }
  v.log = qa.log();
  return v;
}

// --- canonical spherical test ----------------------------------------------

struct CanonicalPlan {
  bool full_query = false;
  int r = 0;        // top level of the grid system
  int r_prime = 0;  // deepest level sampled per basic step
  int64_t basic_steps = 0;
};

inline CanonicalPlan canonical_plan(int32_t n, int d, int32_t k, double eps) {
  CanonicalPlan plan;
  double dd = d;
  plan.full_query = static_cast<double>(k) > std::pow(eps, 1.0 / dd) * n / 10.0 || n < 2 * k;
  if (n >= 2 * k) {
    int r = 0;
    while ((int64_t{1} << (r + 1)) <= n / (2 * k)) ++r;
    plan.r = r;
    double arg = std::pow(eps, 1.0 / dd) * n / k;
    int rp = static_cast<int>(std::floor(std::log2(arg)));
    plan.r_prime = std::clamp(rp, 1, r);
    plan.basic_steps = static_cast<int64_t>(std::ceil(2.0 * detail::int_pow(3, d) / eps));
  }
  return plan;
}

namespace detail {

// One basic step: query the closure of a uniform G_0-block and the boundary
// of a uniform G_i-block for 1 <= i <= depth. Returns the picked blocks.
template <class T>
void basic_step(const GridSystem& sys, int depth, QueriedArray<T>& qa, Rng& rng,
                std::vector<std::pair<int, Block>>& picks) {
  {
    const Grid& g0 = sys.level(0);
    Block b = g0.block_at(static_cast<int64_t>(rng.below(g0.block_count())));
    picks.emplace_back(0, b);
    g0.geometry(b).for_each_closure_cell([&](const Coord& c) { qa.read(c); });
  }
  for (int i = 1; i <= depth; ++i) {
    const Grid& gi = sys.level(i);
    Block b = gi.block_at(static_cast<int64_t>(rng.below(gi.block_count())));
    picks.emplace_back(i, b);
    gi.geometry(b).for_each_boundary_cell([&](const Coord& c) { qa.read(c); });
  }
}

template <class T>
Verdict evaluate_picks(const LocalProperty<T>& p, const GridSystem& sys, QueriedArray<T>& qa,
                       const std::vector<std::pair<int, Block>>& picks,
                       const TesterOptions& opts) {
  auto value = [&](const Coord& c) { return qa.value(c); };
  Verdict v;
  for (const auto& [level, b] : picks) {
    BoxSpec box = sys.level(level).geometry(b);
    if (level == 0) {
      if (auto bad = scan_box_for_forbidden(p, box, value)) {
        v.accept = false;
        v.evidence = Evidence{0, box, RejectReason::kForbiddenWindow, *bad};
        break;
      }
    } else if (!infer_block(p, box, value, opts.infer_budget, false).repairable) {
      v.accept = false;
      v.evidence = Evidence{level, box, RejectReason::kUnrepairable, std::nullopt};
      break;
    }
  }
  v.log = qa.log();
  return v;
}

}  // namespace detail

// Canonical spherical test over the (n, d, k, 2k)-system of grids. All queries are
// drawn before any value is inspected; the query set is a function of
// (n, d, k, eps, seed) only.
template <class T>
Verdict canonical_test(const LocalProperty<T>& p, const Array<T>& a, double eps, Rng rng,
                       const TesterOptions& opts = {}) {
  if (a.dim() != p.d) throw std::invalid_argument("canonical_test: dimension mismatch");
  if (eps <= 0 || eps > 1) throw std::invalid_argument("canonical_test: eps must be in (0, 1]");
  const int32_t n = a.width();
  if (n < p.k) throw std::invalid_argument("canonical_test: n < k");

  CanonicalPlan plan = canonical_plan(n, a.dim(), p.k, eps);
  if (plan.full_query) return detail::full_query_verdict(p, a);

  GridSystem sys = GridSystem::build(n, a.dim(), p.k, 2 * p.k);
  QueriedArray<T> qa(a);
  std::vector<std::pair<int, Block>> picks;
  for (int64_t s = 0; s < plan.basic_steps; ++s)
    detail::basic_step(sys, plan.r_prime, qa, rng, picks);
  return detail::evaluate_picks(p, sys, qa, picks, opts);
}

// Proximity-oblivious test: a single basic step sampling every level of the
// system (r in place of r').
template <class T>
Verdict pot(const LocalProperty<T>& p, const Array<T>& a, Rng rng, const TesterOptions& opts = {}) {
  if (a.dim() != p.d) throw std::invalid_argument("pot: dimension mismatch");
  const int32_t n = a.width();
  if (n < p.k) throw std::invalid_argument("pot: n < k");
  if (n < 2 * p.k) return detail::full_query_verdict(p, a);

  GridSystem sys = GridSystem::build(n, a.dim(), p.k, 2 * p.k);
  QueriedArray<T> qa(a);
  std::vector<std::pair<int, Block>> picks;
  detail::basic_step(sys, sys.top_level(), qa, rng, picks);
  return detail::evaluate_picks(p, sys, qa, picks, opts);
}

// ceil(2 * 3^d / eps) independent POT iterations; rejects iff any rejects.
template <class T>
Verdict amplified_pot(const LocalProperty<T>& p, const Array<T>& a, double eps, Rng rng,
                      const TesterOptions& opts = {}) {
  if (eps <= 0 || eps > 1) throw std::invalid_argument("amplified_pot: eps must be in (0, 1]");
  int64_t iters = static_cast<int64_t>(std::ceil(2.0 * detail::int_pow(3, a.dim()) / eps));
  Verdict combined;
  for (int64_t i = 0; i < iters; ++i) {
    Verdict v = pot(p, a, rng.split(static_cast<uint64_t>(i)), opts);
    combined.log.raw_count += v.log.raw_count;
    combined.log.distinct.insert(v.log.distinct.begin(), v.log.distinct.end());
    if (!v.accept && combined.accept) {
      combined.accept = false;
      combined.evidence = v.evidence;
    }
  }
  return combined;
}

inline int64_t amplified_pot_iterations(int d, double eps) {
  return static_cast<int64_t>(std::ceil(2.0 * detail::int_pow(3, d) / eps));
}

}  // namespace localtest

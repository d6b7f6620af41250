#include "bandembed/weights.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bandembed {

namespace {

constexpr double kSlack = 1e-9;

// Distance from t to the nearest point of a sorted nonempty list.
double distance_to(const std::vector<double>& sorted, double t) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
  double d = INFINITY;
  if (it != sorted.end()) d = std::min(d, *it - t);
  if (it != sorted.begin()) d = std::min(d, t - *std::prev(it));
  return d;
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

bool validate_params(const WeightParams& p) {
  if (!(p.C > 0.0 && p.L0 > 0.0 && p.L1 > 0.0) || p.L < 1 || p.R < 1 || p.M < 1) return false;
  const double bound = 4.0 * p.L1 + 1.0 + 4.0 * p.C * p.L0 * (4.0 * p.L0 + 3.0);
  return static_cast<double>(p.L) > bound && p.R > p.M && p.M > p.L;
}

Bases bases(const Tiling& tiling, const WeightParams& p) {
  Bases out;
  for (const Tile& t : tiling.tiles) {
    if (t.empty) continue;
    const bool clipped = t.clipped_left || t.clipped_right;
    out.a0[t.n] = clipped ? 0.0 : positive_part(t.length() - p.L1) / p.C;
  }
  const std::vector<double> bd = tiling.boundaries();
  if (bd.empty()) return out;
  const auto lo = static_cast<std::int64_t>(std::ceil(tiling.window.lo));
  const auto hi = static_cast<std::int64_t>(std::floor(tiling.window.hi));
  for (double b : bd) {
    const auto k0 = std::max(lo, static_cast<std::int64_t>(std::ceil(b - p.L0)));
    const auto k1 = std::min(hi, static_cast<std::int64_t>(std::floor(b + p.L0)));
    for (std::int64_t k = k0; k <= k1; ++k) {
      const double v = p.L0 - distance_to(bd, static_cast<double>(k));
      if (v > 0.0) out.b0[k] = v;
    }
  }
  return out;
}

GreedyResult greedy_rounds(const IndexMap& a0, const IndexMap& b0, const WeightParams& p) {
  GreedyResult res;
  IndexMap a = a0;
  IndexMap b = b0;
  const auto width = static_cast<std::size_t>(p.R + 1);
  for (const auto& [n, value] : a0) res.v[n].assign(width, 0.0);
  for (std::int64_t m = 0; m <= p.R; ++m) {
    for (auto& [n, an] : a) {
      if (an <= 0.0) continue;
      auto it = b.find(n + m);
      if (it == b.end() || it->second <= 0.0) continue;
      const double give = std::min(an, it->second);
      an -= give;
      it->second -= give;
      res.v[n][static_cast<std::size_t>(m)] = give;
    }
  }
  res.residual_a = a;
  for (const auto& [k, bk] : b) {
    if (bk > kSlack) res.residual_b[k] = bk;
  }
  return res;
}

double cascade_alpha(double t, std::int64_t R) {
  const auto r = static_cast<double>(R);
  return r - (r - 1.0) * std::min(std::max(t, 0.0), 1.0);
}

double cascade_beta(double t) { return std::clamp(t - 1.0, 0.0, 1.0); }

std::vector<double> cascade_A(const std::vector<double>& x, std::int64_t R) {
  std::vector<double> y(x.size(), 0.0);
  if (x.empty()) return y;
  const std::size_t top = x.size() - 1;
  y[top] = static_cast<double>(R) * x[top];
  double later = y[top];
  for (std::size_t m = top; m-- > 0;) {
    y[m] = cascade_alpha(later, R) * x[m];
    later = std::max(later, y[m]);
  }
  return y;
}

std::vector<double> WeightMatrix::row(std::int64_t n) const {
  auto it = w.find(n);
  if (it != w.end()) return it->second;
  return std::vector<double>(static_cast<std::size_t>(params.R + 1), 0.0);
}

WeightMatrix finalize(const VMatrix& v, const WeightParams& p) {
  WeightMatrix out;
  out.v = v;
  out.params = p;
  for (const auto& [n, x] : v) {
    std::vector<double> y = cascade_A(x, p.R);
    for (double& e : y) e = cascade_beta(e);
    out.w[n] = std::move(y);
  }
  return out;
}

Interior interior_of(const Tiling& tiling, const WeightParams& p) {
  const auto lo = static_cast<std::int64_t>(std::ceil(tiling.window.lo));
  const auto hi = static_cast<std::int64_t>(std::floor(tiling.window.hi));
  return {lo + p.R + p.M, hi - p.R - p.M, lo + p.M, hi - p.R - p.M};
}

WeightRun run_weights(const MarkerSeq& markers, Interval window, const WeightParams& p) {
  WeightRun run;
  run.tiling = compute_tiles(markers, window);
  run.base = bases(run.tiling, p);
  run.greedy = greedy_rounds(run.base.a0, run.base.b0, p);
  run.weights = finalize(run.greedy.v, p);
  return run;
}

WeightReport verify_conditions(const WeightRun& run, const WeightParams& p, const WeightRun* shifted) {
  WeightReport rep;
  const Interior in = interior_of(run.tiling, p);
  const WeightMatrix& wm = run.weights;
  auto note = [&rep](const std::string& s) {
    if (rep.witnesses.size() < 32) rep.witnesses.push_back(s);
  };

  rep.residual_zero = true;
  for (const auto& [k, bk] : run.greedy.residual_b) {
    if (k >= in.receiver_lo && k <= in.receiver_hi) {
      rep.residual_zero = false;
      std::ostringstream s;
      s << "residual need " << bk << " at " << k;
      note(s.str());
    }
  }

  rep.conservation = true;
  for (std::int64_t k = in.receiver_lo; k <= in.receiver_hi; ++k) {
    double served = 0.0;
    for (std::int64_t m = 0; m <= p.R; ++m) {
      auto it = wm.v.find(k - m);
      if (it != wm.v.end()) served += it->second[static_cast<std::size_t>(m)];
    }
    auto b = run.base.b0.find(k);
    const double need = b == run.base.b0.end() ? 0.0 : b->second;
    if (std::abs(served - need) > kSlack) {
      rep.conservation = false;
      std::ostringstream s;
      s << "conservation at " << k << ": served " << served << " need " << need;
      note(s.str());
    }
  }

  rep.tax_cap = true;
  rep.sparsity = true;
  rep.c2_short_tiles = true;
  rep.c3_support = true;
  for (const auto& [n, x] : wm.v) {
    double total = 0.0;
    int x_big = 0;
    for (double e : x) {
      total += e;
      if (e > 1.0) ++x_big;
    }
    const double a0 = run.base.a0.at(n);
    if (p.C * total > p.C * a0 + kSlack) {
      rep.tax_cap = false;
      note("tax cap exceeded at donor " + std::to_string(n));
    }
    const std::vector<double> y = cascade_A(x, p.R);
    const auto y_big = std::count_if(y.begin(), y.end(), [](double e) { return e > 1.0; });
    if (y_big > 1 + x_big) {
      rep.sparsity = false;
      note("cascade sparsity fails at donor " + std::to_string(n));
    }
    if (n < in.donor_lo || n > in.donor_hi) continue;
    const Tile* tile = run.tiling.find(n);
    const double len = tile ? tile->length() : 0.0;
    const std::vector<double>& w = wm.w.at(n);
    const auto support = std::count_if(w.begin(), w.end(), [](double e) { return e > 0.0; });
    if (len <= p.L1 && support != 0) {
      rep.c2_short_tiles = false;
      note("short tile with nonzero weight at " + std::to_string(n));
    }
    if (static_cast<double>(support) > 1.0 + positive_part(len - p.L1) / p.C + kSlack) {
      rep.c3_support = false;
      note("weight support too large at " + std::to_string(n));
    }
  }

  rep.c4_wild_service = true;
  const std::vector<double> bd = run.tiling.boundaries();
  for (std::int64_t k = in.receiver_lo; k <= in.receiver_hi && !bd.empty(); ++k) {
    if (distance_to(bd, static_cast<double>(k)) > p.L0 - 4.0) continue;
    ++rep.wild_points;
    bool served = false;
    for (std::int64_t n = k - p.R; n <= k && !served; ++n) {
      auto it = wm.w.find(n);
      served = it != wm.w.end() && it->second[static_cast<std::size_t>(k - n)] == 1.0;
    }
    if (!served) {
      rep.c4_wild_service = false;
      note("wild point " + std::to_string(k) + " not served");
    }
  }

  if (shifted != nullptr) {
    rep.c1_equivariance = true;
    const Interior sin = interior_of(shifted->tiling, p);
    for (std::int64_t n = std::max(in.donor_lo, sin.donor_lo + 1); n <= std::min(in.donor_hi, sin.donor_hi + 1); ++n) {
      const std::vector<double> here = wm.row(n);
      const std::vector<double> there = shifted->weights.row(n - 1);
      for (std::size_t m = 0; m < here.size(); ++m) {
        if (std::abs(here[m] - there[m]) > kSlack) {
          rep.c1_equivariance = false;
          note("equivariance fails at donor " + std::to_string(n));
          break;
        }
      }
    }
  }
  return rep;
}

bool surplus_check(const Tiling& tiling, const WeightParams& p, double a) {
  const std::vector<double> bd = tiling.boundaries();
  double tax = 0.0;
  double cost = 0.0;
  const auto n0 = static_cast<std::int64_t>(std::ceil(a));
  const auto n1 = static_cast<std::int64_t>(std::floor(a + static_cast<double>(p.R)));
  for (std::int64_t n = n0; n <= n1; ++n) {
    if (const Tile* t = tiling.find(n)) tax += positive_part(t->length() - p.L1);
    if (!bd.empty()) cost += positive_part(p.L0 - distance_to(bd, static_cast<double>(n)));
  }
  return tax >= p.C * cost;
}

}  // namespace bandembed

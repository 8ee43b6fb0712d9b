#include "ftile/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace ftile {

NeighborGraph reduce_to_proper(const EdgeTable &table) {
  const std::size_t n = table.vertex_count(), m = table.m, per = m * m;
  std::vector<std::size_t> outdeg(n, 0);
  std::vector<std::vector<std::uint32_t>> preds(n);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t jk = 0; jk < per; ++jk) {
      const std::int32_t t = table.next[v * per + jk];
      if (t < 0) continue;
      ++outdeg[v];
      preds[static_cast<std::size_t>(t)].push_back(static_cast<std::uint32_t>(v));
    }
  std::vector<std::uint8_t> alive(n, 1);
  std::vector<std::size_t> queue;
  for (std::size_t v = 1; v < n; ++v)
    if (outdeg[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    const std::size_t v = queue.back();
    queue.pop_back();
    if (!alive[v]) continue;
    alive[v] = 0;
    for (std::uint32_t p : preds[v])
      if (alive[p] && --outdeg[p] == 0 && p != 0) queue.push_back(p);
  }

  NeighborGraph g;
  std::vector<std::int32_t> vertex_of(n, -1);
  for (std::size_t v = 0; v < n; ++v)
    if (alive[v]) {
      vertex_of[v] = static_cast<std::int32_t>(g.candidate.size());
      g.candidate.push_back(v);
    }
  g.edges.m = m;
  g.edges.next.assign(g.candidate.size() * per, EdgeTable::kPruned);
  for (std::size_t u = 0; u < g.candidate.size(); ++u)
    for (std::size_t jk = 0; jk < per; ++jk) {
      const std::int32_t t = table.next[g.candidate[u] * per + jk];
      if (t >= 0) g.edges.next[u * per + jk] = vertex_of[static_cast<std::size_t>(t)];
    }
  return g;
}

NeighborGraph reduce_to_proper(const FTOutcome &outcome) {
  if (outcome.status != FTStatus::FiniteType)
    throw Error(ErrorKind::ConfigError, "the neighbor graph needs a FiniteType outcome");
  return reduce_to_proper(outcome.edges);
}

OverlapInfo detect_overlap(const NeighborGraph &g) {
  const std::size_t n = g.size(), m = g.edges.m, per = m * m;
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> preds(n); // (source, jk)
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t jk = 0; jk < per; ++jk) {
      const std::int32_t t = g.edges.next[v * per + jk];
      if (t >= 0)
        preds[static_cast<std::size_t>(t)].emplace_back(static_cast<std::uint32_t>(v),
                                                         static_cast<std::uint32_t>(jk));
    }
  OverlapInfo info;
  info.reaches_identity.assign(n, 0);
  info.next_hop.assign(n, {0, 0});
  if (n == 0) return info;
  std::deque<std::size_t> queue{0};
  info.reaches_identity[0] = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (auto [v, jk] : preds[u])
      if (!info.reaches_identity[v]) {
        info.reaches_identity[v] = 1;
        info.next_hop[v] = {static_cast<std::uint32_t>(jk / m), static_cast<std::uint32_t>(jk % m)};
        queue.push_back(v);
      }
  }
  for (std::size_t v = 1; v < n; ++v)
    if (info.reaches_identity[v]) info.overlap_set.push_back(v);
  info.osc = info.overlap_set.empty();
  return info;
}

std::vector<std::pair<std::size_t, std::size_t>> witness_path(const NeighborGraph &g, const OverlapInfo &info,
                                                               std::size_t v) {
  std::vector<std::pair<std::size_t, std::size_t>> path;
  if (!info.reaches_identity.at(v)) return path;
  while (v != 0) {
    auto [j, k] = info.next_hop[v];
    path.emplace_back(j, k);
    v = static_cast<std::size_t>(g.edges.at(v, j, k));
  }
  return path;
}

SparseMatrix SparseMatrix::from_dense(const std::vector<std::vector<double>> &rows) {
  SparseMatrix M;
  M.n = rows.size();
  for (std::size_t c = 0; c < M.n; ++c)
    for (std::size_t r = 0; r < M.n; ++r)
      if (rows[r].at(c) != 0.0)
        M.entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), rows[r][c]});
  return M;
}

std::vector<double> SparseMatrix::column_sums() const {
  std::vector<double> s(n, 0.0);
  for (const auto &e : entries) s[e.col] += e.value;
  return s;
}

namespace {

/// Open hash set of type ids; equality and hashing look through the arena.
class TypeIndex {
public:
  explicit TypeIndex(const TypeGraph &tg)
      : tg_(tg), set_(1024, Hash{&tg_, &pending_}, Eq{&tg_, &pending_}) {}

  /// Returns the id of the type stored as the last, not yet committed, slice
  /// of the arena, and whether it is new.
  std::pair<std::uint32_t, bool> intern(std::size_t begin, std::uint32_t fresh_id) {
    pending_ = {begin, tg_.arena.size()};
    auto [it, inserted] = set_.insert(fresh_id);
    return {*it, inserted};
  }

private:
  using Range = std::pair<std::size_t, std::size_t>;
  static Range range(const TypeGraph &tg, const Range &pending, std::uint32_t id) {
    if (id + 1 < tg.offsets.size()) return {tg.offsets[id], tg.offsets[id + 1]};
    return pending;
  }
  struct Hash {
    const TypeGraph *tg;
    const Range *pending;
    std::size_t operator()(std::uint32_t id) const {
      auto [a, b] = range(*tg, *pending, id);
      std::size_t h = 0xcbf29ce484222325ull ^ (b - a);
      for (std::size_t i = a; i < b; ++i) h = (h ^ tg->arena[i]) * 0x100000001b3ull;
      return h;
    }
  };
  struct Eq {
    const TypeGraph *tg;
    const Range *pending;
    bool operator()(std::uint32_t x, std::uint32_t y) const {
      auto [a, b] = range(*tg, *pending, x);
      auto [c, d] = range(*tg, *pending, y);
      return b - a == d - c && std::equal(tg->arena.begin() + static_cast<long>(a),
                                          tg->arena.begin() + static_cast<long>(b),
                                          tg->arena.begin() + static_cast<long>(c));
    }
  };

  const TypeGraph &tg_;
  Range pending_{0, 0};
  std::unordered_set<std::uint32_t, Hash, Eq> set_;
};

} // namespace

TypeGraph neighborhood_types(const NeighborGraph &g, const FTOutcome &outcome, const OverlapInfo &info,
                             const TypeOptions &options) {
  const std::size_t n = g.size(), m = g.edges.m;
  TypeGraph tg;
  tg.m = m;
  tg.overlap_universe = options.overlap_universe;

  std::vector<std::uint8_t> in_universe(n, 0);
  for (std::size_t v = 1; v < n; ++v)
    in_universe[v] = options.overlap_universe ? info.reaches_identity[v] : 1;

  // children[h*m + k]: universe members among successor(h, k, l), l = 0..m-1
  std::vector<std::vector<std::uint32_t>> children(n * m);
  for (std::size_t h = 0; h < n; ++h) {
    if (h != 0 && !in_universe[h]) continue;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) {
        const std::int32_t t = g.edges.at(h, k, l);
        if (t > 0 && in_universe[static_cast<std::size_t>(t)])
          children[h * m + k].push_back(static_cast<std::uint32_t>(t));
      }
  }

  // disown[h*m + k]: some successor(h, k, l) is the identity and the pair
  // (l, key(h)) precedes (k, key(id)), so the coinciding piece is counted
  // elsewhere.
  const std::string id_key = outcome.candidate(g.candidate[0]).key();
  std::vector<std::uint8_t> disown(n * m, 0);
  for (std::size_t h = 1; h < n; ++h) {
    if (!in_universe[h]) continue;
    std::string key;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t l = 0; l < m; ++l) {
        if (g.edges.at(h, k, l) != 0) continue;
        if (l < k) {
          disown[h * m + k] = 1;
        } else if (l == k) {
          if (key.empty()) key = outcome.candidate(g.candidate[h]).key();
          if (key < id_key) disown[h * m + k] = 1;
        }
      }
  }

  TypeIndex index(tg);
  tg.offsets.push_back(0);
  index.intern(0, 0);
  tg.offsets.push_back(0); // root: the empty type

  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  for (std::size_t t = 0; t < tg.size(); ++t) {
    for (std::size_t k = 0; k < m; ++k) {
      ++epoch;
      const std::size_t begin = tg.arena.size();
      auto collect = [&](std::size_t h) {
        for (std::uint32_t c : children[h * m + k])
          if (stamp[c] != epoch) {
            stamp[c] = epoch;
            tg.arena.push_back(c);
          }
      };
      collect(0);
      bool owned = true;
      for (std::size_t i = tg.offsets[t]; i < tg.offsets[t + 1]; ++i) {
        const std::uint32_t h = tg.arena[i];
        collect(h);
        if (disown[h * m + k]) owned = false;
      }
      std::sort(tg.arena.begin() + static_cast<long>(begin), tg.arena.end());
      const auto fresh = static_cast<std::uint32_t>(tg.size());
      auto [id, inserted] = index.intern(begin, fresh);
      if (inserted) {
        if (tg.size() >= options.cap)
          throw Error(ErrorKind::TypeExplosion,
                      "more than " + std::to_string(options.cap) + " neighborhood types");
        tg.offsets.push_back(tg.arena.size());
      } else {
        tg.arena.resize(begin);
      }
      tg.child.push_back(id);
      tg.owned.push_back(owned ? 1 : 0);
    }
  }
  return tg;
}

SparseMatrix TypeGraph::incidence() const {
  SparseMatrix M;
  M.n = size();
  for (std::size_t t = 0; t < size(); ++t) {
    std::vector<std::pair<std::uint32_t, double>> col;
    for (std::size_t k = 0; k < m; ++k)
      if (owned[t * m + k]) col.emplace_back(child[t * m + k], 1.0);
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < col.size(); ++i) {
      if (i > 0 && col[i].first == col[i - 1].first) {
        M.entries.back().value += 1.0;
        continue;
      }
      M.entries.push_back({col[i].first, static_cast<std::uint32_t>(t), 1.0});
    }
  }
  return M;
}

namespace {

/// Iterative Tarjan. comp[v] is the component id; components come out in
/// reverse topological order.
std::vector<std::uint32_t> strongly_connected(std::size_t n, const std::vector<std::vector<std::uint32_t>> &adj,
                                              std::size_t &count) {
  const std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> index(n, none), low(n, 0), comp(n, none);
  std::vector<std::uint32_t> stack;
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::pair<std::uint32_t, std::size_t>> call;
  std::uint32_t counter = 0;
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (index[s] != none) continue;
    call.emplace_back(static_cast<std::uint32_t>(s), 0);
    while (!call.empty()) {
      auto &[v, pos] = call.back();
      if (pos == 0) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      if (pos < adj[v].size()) {
        const std::uint32_t w = adj[v][pos++];
        if (index[w] == none) {
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = static_cast<std::uint32_t>(count);
        } while (w != v);
        ++count;
      }
      const std::uint32_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }
  return comp;
}

} // namespace

std::vector<std::size_t> recurrent_types(const TypeGraph &tg) {
  const std::size_t n = tg.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t k = 0; k < tg.m; ++k) adj[t].push_back(tg.child[t * tg.m + k]);
  std::size_t count = 0;
  const auto comp = strongly_connected(n, adj, count);
  std::vector<std::uint8_t> closed(count, 1);
  for (std::size_t t = 0; t < n; ++t)
    for (auto c : adj[t])
      if (comp[c] != comp[t]) closed[comp[t]] = 0;
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < n; ++t)
    if (closed[comp[t]]) out.push_back(t);
  return out;
}

SpectralResult spectral_bounds(const SparseMatrix &M, double tolerance) {
  const std::size_t n = M.n;
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto &e : M.entries)
    if (e.value > 0) adj[e.col].push_back(e.row);
  std::size_t count = 0;
  const auto comp = strongly_connected(n, adj, count);

  std::vector<std::vector<SparseMatrix::Entry>> inner(count);
  for (const auto &e : M.entries)
    if (e.value > 0 && comp[e.row] == comp[e.col]) inner[comp[e.row]].push_back(e);
  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::size_t v = 0; v < n; ++v) members[comp[v]].push_back(static_cast<std::uint32_t>(v));

  SpectralResult best;
  std::vector<std::uint32_t> local(n, 0);
  for (std::size_t c = 0; c < count; ++c) {
    if (inner[c].empty()) continue;
    const auto &vs = members[c];
    const std::size_t s = vs.size();
    for (std::size_t i = 0; i < s; ++i) local[vs[i]] = static_cast<std::uint32_t>(i);
    if (s == 1) {
      const double v = inner[c].front().value;
      if (v > best.sigma) best = {v, v, v, 0};
      continue;
    }
    // Irreducible block: power iteration on B = A + I (primitive), bracketing
    // rho(B) with Collatz-Wielandt quotients of both B and its transpose.
    std::vector<double> x(s, 1.0), y(s, 1.0), bx(s), by(s);
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    const std::size_t max_iter = 100000;
    for (; it < max_iter; ++it) {
      std::copy(x.begin(), x.end(), bx.begin());
      std::copy(y.begin(), y.end(), by.begin());
      for (const auto &e : inner[c]) {
        bx[local[e.row]] += e.value * x[local[e.col]];
        by[local[e.col]] += e.value * y[local[e.row]];
      }
      double xmin = std::numeric_limits<double>::infinity(), xmax = 0.0;
      double ymin = xmin, ymax = 0.0, xnorm = 0.0, ynorm = 0.0;
      for (std::size_t i = 0; i < s; ++i) {
        const double qx = bx[i] / x[i], qy = by[i] / y[i];
        xmin = std::min(xmin, qx);
        xmax = std::max(xmax, qx);
        ymin = std::min(ymin, qy);
        ymax = std::max(ymax, qy);
        xnorm = std::max(xnorm, bx[i]);
        ynorm = std::max(ynorm, by[i]);
      }
      lo = std::max({lo, xmin, ymin});
      hi = std::min({hi, xmax, ymax});
      if (hi - lo <= tolerance * std::max(1.0, lo - 1.0)) break;
      for (std::size_t i = 0; i < s; ++i) {
        x[i] = std::max(bx[i] / xnorm, 1e-300);
        y[i] = std::max(by[i] / ynorm, 1e-300);
      }
    }
    const double sigma = 0.5 * (lo + hi) - 1.0;
    if (sigma > best.sigma) best = {sigma, lo - 1.0, hi - 1.0, it};
  }
  return best;
}

double spectral_radius(const SparseMatrix &M, double tolerance) { return spectral_bounds(M, tolerance).sigma; }

double spectral_radius(const std::vector<std::vector<double>> &rows, double tolerance) {
  return spectral_radius(SparseMatrix::from_dense(rows), tolerance);
}

DimensionReport dimension(const IFSystem &sys, const OverlapInfo &info, const TypeGraph &tg) {
  DimensionReport rep;
  const double log_lambda = std::log(sys.field().modulus());
  rep.alpha = std::log(static_cast<double>(sys.size())) / log_lambda;
  rep.sigma = spectral_radius(tg.incidence());
  rep.beta = rep.sigma > 1.0 ? std::log(rep.sigma) / log_lambda : 0.0;
  rep.osc = info.osc;
  rep.overlap_count = info.overlap_count();
  rep.type_count = tg.size();
  if (rep.osc) {
    const double m = static_cast<double>(sys.size());
    if (std::abs(rep.sigma - m) > 1e-9 * m)
      throw std::logic_error("open set condition holds but the spectral radius differs from m");
    rep.sigma = m;
    rep.beta = rep.alpha;
  }
  return rep;
}

} // namespace ftile

#include "ftile/ft.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace ftile {

std::string canonical_key(const IntMatrix &S, const IntVector &w) {
  std::string out;
  const std::size_t d = w.size();
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<char>((d >> shift) & 0xffu));
  for (const auto &x : S.entries()) append_sign_magnitude(out, x);
  for (const auto &x : w.entries()) append_sign_magnitude(out, x);
  return out;
}

std::string hex(const std::string &bytes) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

std::string NeighborMap::key() const { return canonical_key(S, w); }

NeighborMap identity_map(std::size_t d) { return {IntMatrix::identity(d), IntVector(d)}; }

NeighborMap successor(const NeighborMap &h, std::size_t j, std::size_t k, const IFSystem &sys) {
  const auto &dj = sys.digits().at(j);
  const auto &dk = sys.digits().at(k);
  return {dj.S_inv * h.S * dk.S, dj.S_inv * (sys.field().L() * h.w + h.S * dk.w - dj.w)};
}

NeighborMap inverse(const NeighborMap &h) {
  auto order = matrix_order(h.S);
  if (!order) throw Error(ErrorKind::NotRootOfUnity, "neighbor map rotation has no finite order");
  IntMatrix s_inv = power(h.S, *order - 1);
  return {s_inv, -(s_inv * h.w)};
}

std::string_view to_string(FTStatus s) {
  return s == FTStatus::FiniteType ? "FiniteType" : "Inconclusive";
}

unsigned default_thread_count() {
  if (const char *env = std::getenv("FTILE_THREADS")) {
    char *end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

/// The finite abelian group generated by the digit rotations, with the two
/// multiplication tables the successor rule needs.
struct RotationGroup {
  std::vector<IntMatrix> elements; // element 0 is the identity
  std::vector<std::uint32_t> right;    // right[g*m + k] = G_g S_k
  std::vector<std::uint32_t> left_inv; // left_inv[j*n + g] = S_j^-1 G_g

  RotationGroup(const IFSystem &sys) {
    const std::size_t m = sys.size();
    std::unordered_map<std::string, std::uint32_t> index;
    const IntVector zero(sys.dim());
    auto intern = [&](IntMatrix g) {
      auto [it, inserted] = index.emplace(canonical_key(g, zero), static_cast<std::uint32_t>(elements.size()));
      if (inserted) {
        if (elements.size() >= (1u << 20))
          throw Error(ErrorKind::NotRootOfUnity, "rotation group is too large");
        elements.push_back(std::move(g));
      }
      return it->second;
    };
    intern(IntMatrix::identity(sys.dim()));
    for (std::size_t g = 0; g < elements.size(); ++g)
      for (std::size_t k = 0; k < m; ++k) intern(elements[g] * sys.digits()[k].S);
    const std::size_t n = elements.size();
    right.resize(n * m);
    left_inv.resize(m * n);
    for (std::size_t g = 0; g < n; ++g)
      for (std::size_t k = 0; k < m; ++k) {
        right[g * m + k] = index.at(canonical_key(elements[g] * sys.digits()[k].S, zero));
        left_inv[k * n + g] = index.at(canonical_key(sys.digits()[k].S_inv * elements[g], zero));
      }
  }
};

inline std::size_t mix(std::size_t h, std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return h ^ (x ^ (x >> 31));
}

inline std::uint64_t hash_word(Checked64 x) { return static_cast<std::uint64_t>(x.value()); }
inline std::uint64_t hash_word(const BigInt &x) {
  const auto &be = x.backend();
  std::uint64_t h = static_cast<std::uint64_t>(be.size()) * 2 + (x.sign() < 0 ? 1 : 0);
  return h ^ (static_cast<std::uint64_t>(be.limbs()[0]) << 1);
}

template <class T> class Engine {
public:
  Engine(const IFSystem &sys, const RotationGroup &group, const FTOptions &opt, unsigned threads)
      : sys_(sys), group_(group), opt_(opt), threads_(threads), d_(sys.dim()), m_(sys.size()),
        n_rot_(group.elements.size()), store_{d_, {}, {}},
        index_(64, KeyHash{&store_}, KeyEq{&store_}) {
    const auto &L = sys.field().L();
    for (std::size_t j = 0; j < m_; ++j) {
      const IntMatrix a = sys.digits()[j].S_inv * L;
      for (const auto &x : a.entries()) a_.push_back(from_bigint<T>(x));
    }
    for (std::size_t j = 0; j < m_; ++j)
      for (std::size_t g = 0; g < n_rot_; ++g)
        for (std::size_t k = 0; k < m_; ++k) {
          const auto &dj = sys.digits()[j];
          IntVector c = dj.S_inv * (group.elements[g] * sys.digits()[k].w - dj.w);
          for (const auto &x : c.entries()) c_.push_back(from_bigint<T>(x));
        }
    b_ = sys.field().basis_embedding();
    for (auto z : b_) babs_.push_back(std::abs(z));
    const double C = sys.C();
    margin_ = opt.margin ? *opt.margin : C * 1e-9 + 1e-9;
    bound_ = C + margin_;
  }

  FTOutcome run() {
    FTOutcome out;
    out.edges.m = m_;
    insert_identity();
    out.embedded.push_back(0.0);
    std::vector<std::uint32_t> level{0};
    std::size_t depth = 0;
    bool exhausted = false;
    while (!level.empty()) {
      if (depth >= opt_.max_level) {
        exhausted = true;
        break;
      }
      ++depth;
      std::vector<std::uint32_t> next;
      for (std::size_t start = 0; start < level.size() && !exhausted; start += kChunk) {
        const std::size_t count = std::min(kChunk, level.size() - start);
        expand(level.data() + start, count);
        exhausted = !merge(level.data() + start, count, next, out);
      }
      out.levels.push_back(next.size());
      if (exhausted) break;
      level.swap(next);
    }
    out.status = exhausted ? FTStatus::Inconclusive : FTStatus::FiniteType;
    finish(out);
    return out;
  }

private:
  static constexpr std::size_t kChunk = 2048;

  struct Store {
    std::size_t d;
    std::vector<std::uint32_t> rot;
    std::vector<T> w;
  };
  struct KeyHash {
    const Store *s;
    std::size_t operator()(std::uint32_t i) const {
      std::size_t h = s->rot[i];
      for (std::size_t t = 0; t < s->d; ++t) h = mix(h, hash_word(s->w[i * s->d + t]));
      return h;
    }
  };
  struct KeyEq {
    const Store *s;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      if (s->rot[a] != s->rot[b]) return false;
      for (std::size_t t = 0; t < s->d; ++t)
        if (!(s->w[a * s->d + t] == s->w[b * s->d + t])) return false;
      return true;
    }
  };

  struct Slot {
    std::uint32_t rot = 0;
    bool keep = false;
    Complex z;
  };

  void insert_identity() {
    store_.rot.push_back(0);
    store_.w.resize(d_, T(0));
    index_.insert(0);
    edges_.resize(m_ * m_, EdgeTable::kUnknown);
  }

  void compute(std::uint32_t src, std::size_t j, std::size_t k, Slot &slot, T *w_out) const {
    const std::uint32_t g = store_.rot[src];
    slot.rot = group_.left_inv[j * n_rot_ + group_.right[g * m_ + k]];
    const T *w = store_.w.data() + static_cast<std::size_t>(src) * d_;
    const T *a = a_.data() + j * d_ * d_;
    const T *c = c_.data() + ((j * n_rot_ + g) * m_ + k) * d_;
    Complex z = 0.0;
    double scale = 0.0;
    for (std::size_t r = 0; r < d_; ++r) {
      T acc = c[r];
      for (std::size_t t = 0; t < d_; ++t)
        if (!(a[r * d_ + t] == T(0))) acc += a[r * d_ + t] * w[t];
      const double v = to_double(acc);
      z += b_[r] * v;
      scale += babs_[r] * std::abs(v);
      w_out[r] = std::move(acc);
    }
    slot.z = z;
    const double rounding = 4.0 * static_cast<double>(d_ + 1) * std::numeric_limits<double>::epsilon() * scale;
    slot.keep = std::abs(z) <= bound_ + rounding;
  }

  void expand(const std::uint32_t *sources, std::size_t count) {
    const std::size_t per = m_ * m_;
    slots_.assign(count * per, Slot{});
    wbuf_.assign(count * per * d_, T(0));
    auto work = [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        for (std::size_t j = 0; j < m_; ++j)
          for (std::size_t k = 0; k < m_; ++k) {
            const std::size_t s = i * per + j * m_ + k;
            compute(sources[i], j, k, slots_[s], wbuf_.data() + s * d_);
          }
    };
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(threads_, count));
    if (nthreads <= 1) {
      work(0, count);
      return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t lo = count * t / nthreads, hi = count * (t + 1) / nthreads;
      pool.emplace_back([&, t, lo, hi] {
        try {
          work(lo, hi);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto &th : pool) th.join();
    for (auto &e : errors)
      if (e) std::rethrow_exception(e);
  }

  /// Sequential merge in source order keeps the numbering independent of the
  /// thread count. Returns false once the budget is exceeded.
  bool merge(const std::uint32_t *sources, std::size_t count, std::vector<std::uint32_t> &next,
             FTOutcome &out) {
    const std::size_t per = m_ * m_;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t src = sources[i];
      for (std::size_t jk = 0; jk < per; ++jk) {
        const std::size_t s = i * per + jk;
        ++stats_.examined;
        if (!slots_[s].keep) {
          ++stats_.pruned;
          edges_[src * per + jk] = EdgeTable::kPruned;
          continue;
        }
        const auto fresh = static_cast<std::uint32_t>(store_.rot.size());
        store_.rot.push_back(slots_[s].rot);
        for (std::size_t t = 0; t < d_; ++t) store_.w.push_back(wbuf_[s * d_ + t]);
        auto [it, inserted] = index_.insert(fresh);
        if (!inserted) {
          store_.rot.pop_back();
          store_.w.resize(store_.w.size() - d_);
          ++stats_.duplicates;
          edges_[src * per + jk] = static_cast<std::int32_t>(*it);
          continue;
        }
        edges_[src * per + jk] = static_cast<std::int32_t>(fresh);
        edges_.resize(edges_.size() + per, EdgeTable::kUnknown);
        out.embedded.push_back(slots_[s].z);
        next.push_back(fresh);
        if (store_.rot.size() - 1 > opt_.budget) return false;
      }
    }
    return true;
  }

  void finish(FTOutcome &out) {
    out.rotations = group_.elements;
    out.rotation_of = store_.rot;
    const std::size_t n = store_.rot.size();
    out.translations.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      IntVector w(d_);
      for (std::size_t t = 0; t < d_; ++t) w[t] = to_bigint(store_.w[i * d_ + t]);
      out.translations.push_back(std::move(w));
    }
    out.edges.next = std::move(edges_);
    stats_.rotation_group_order = n_rot_;
    out.stats = stats_;
  }

  const IFSystem &sys_;
  const RotationGroup &group_;
  const FTOptions &opt_;
  unsigned threads_;
  std::size_t d_, m_, n_rot_;
  std::vector<T> a_, c_;
  std::vector<Complex> b_;
  std::vector<double> babs_;
  double margin_ = 0.0, bound_ = 0.0;
  Store store_;
  std::unordered_set<std::uint32_t, KeyHash, KeyEq> index_;
  std::vector<std::int32_t> edges_;
  std::vector<Slot> slots_;
  std::vector<T> wbuf_;
  FTStats stats_;
};

} // namespace

FTOutcome run_ft(const IFSystem &sys, const FTOptions &options) {
  const auto t0 = std::chrono::steady_clock::now();
  if (options.budget < sys.size() * sys.size())
    throw Error(ErrorKind::ConfigError, "budget must be at least m^2");
  if (options.margin && *options.margin < 0.0) throw Error(ErrorKind::ConfigError, "margin must be nonnegative");
  const unsigned threads = options.threads ? options.threads : default_thread_count();
  const RotationGroup group(sys);

  FTOutcome out;
  bool fallback = options.force_bigint;
  if (!fallback) {
    try {
      out = Engine<Checked64>(sys, group, options, threads).run();
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::OverflowAbort) throw;
      fallback = true;
    }
  }
  if (fallback) out = Engine<BigInt>(sys, group, options, threads).run();
  out.stats.bigint_fallback = fallback;
  out.stats.threads = threads;
  out.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

} // namespace ftile

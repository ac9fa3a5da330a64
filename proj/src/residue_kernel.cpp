#include "residue_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "dotprod/errors.hpp"

namespace dotprod::detail {

namespace {

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Rows are dealt round-robin so the shrinking rows of an upper triangle
// spread evenly; partial sets are merged in thread order.
template <class Set, class Make, class Fill>
Set run_partitioned(std::size_t rows, unsigned threads, Make make, Fill fill) {
  std::vector<Set> parts;
  parts.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) parts.push_back(make());
  if (threads <= 1) {
    for (std::size_t r = 0; r < rows; ++r) fill(parts[0], r);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t r = t; r < rows; r += threads) fill(parts[t], r);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (unsigned t = 1; t < threads; ++t) parts[0].merge(std::move(parts[t]));
  return std::move(parts[0]);
}

template <class Fn>
void run_rows(std::size_t rows, unsigned threads, Fn fn) {
  struct Nothing {
    void merge(Nothing&&) {}
  };
  run_partitioned<Nothing>(rows, threads, [] { return Nothing{}; }, [&](Nothing&, std::size_t r) { fn(r); });
}

// ---------------------------------------------------------------------------
// __int128 kernel

struct Int128Hash {
  std::size_t operator()(__int128 v) const {
    const auto u = static_cast<unsigned __int128>(v);
    return mix64(static_cast<std::uint64_t>(u) ^ mix64(static_cast<std::uint64_t>(u >> 64)));
  }
};

struct SmallImage {
  std::vector<std::int64_t> ax, ay, bx, by;
};

class Int128Set {
 public:
  explicit Int128Set(const SmallImage& img) : img_(&img) {}
  void add(std::size_t i, std::size_t j) {
    values_.insert(static_cast<__int128>(img_->ax[i]) * img_->bx[j] + static_cast<__int128>(img_->ay[i]) * img_->by[j]);
  }
  void merge(Int128Set&& other) { values_.merge(other.values_); }
  std::size_t size() const { return values_.size(); }
  const std::unordered_set<__int128, Int128Hash>& values() const { return values_; }

 private:
  const SmallImage* img_;
  std::unordered_set<__int128, Int128Hash> values_;
};

mpz_class to_mpz(__int128 v) {
  const bool negative = v < 0;
  const auto u = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  const std::uint64_t words[2] = {static_cast<std::uint64_t>(u >> 64), static_cast<std::uint64_t>(u)};
  mpz_class out;
  mpz_import(out.get_mpz_t(), 2, 1, sizeof(std::uint64_t), 0, 0, words);
  return negative ? mpz_class(-out) : out;
}

SmallImage small_image(const IntegerImage& image) {
  SmallImage s;
  auto conv = [](const std::vector<mpz_class>& in, std::vector<std::int64_t>& out) {
    out.reserve(in.size());
    for (const auto& z : in) out.push_back(z.get_si());
  };
  conv(image.ax, s.ax);
  conv(image.ay, s.ay);
  conv(image.bx, s.bx);
  conv(image.by, s.by);
  return s;
}

// ---------------------------------------------------------------------------
// Residue number system kernel. Residues of each coordinate modulo K primes
// p < 2^26 are held as doubles, so a product of two residues is below 2^52
// and exact; the quotient is rounded with the 1.5 * 2^52 trick and the
// remainder corrected into [0, p) with sign masks so the loops vectorize.

constexpr double kRoundMagic = 6755399441055744.0;  // 1.5 * 2^52
constexpr int kPrimeBitsFloor = 25;                 // every prime used is > 2^25

struct ResidueContext {
  std::size_t k = 0;
  std::vector<double> p, pinv;
  std::vector<double> ax, ay, bx, by;  // point-major: point i at [i*k, (i+1)*k)
  bool has_y = false;
};

std::vector<double> residue_table(const std::vector<mpz_class>& coords, const std::vector<std::uint32_t>& primes) {
  const std::size_t k = primes.size();
  std::vector<double> out(coords.size() * k);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      out[i * k + t] = static_cast<double>(mpz_fdiv_ui(coords[i].get_mpz_t(), primes[t]));
    }
  }
  return out;
}

inline double mul_mod(double a, double b, double p, double pinv) {
  const double prod = a * b;
  const double q = (prod * pinv + kRoundMagic) - kRoundMagic;
  const double r = prod - q * p;
  // +p exactly when r < 0; an exact zero is +0.
  return r + p * (0.5 - std::copysign(0.5, r));
}

// key[t] = (ax bx + ay by) mod p_t; ay and by may be null when every y is 0.
// Cloned for AVX2 and resolved at load time.
__attribute__((target_clones("avx2", "default"))) void residue_dot(
    const double* __restrict ax, const double* __restrict bx, const double* __restrict ay,
    const double* __restrict by, const double* __restrict p, const double* __restrict pinv,
    std::uint32_t* __restrict key, std::size_t k) {
  if (ay == nullptr) {
    for (std::size_t t = 0; t < k; ++t) {
      key[t] = static_cast<std::uint32_t>(static_cast<std::int32_t>(mul_mod(ax[t], bx[t], p[t], pinv[t])));
    }
    return;
  }
  for (std::size_t t = 0; t < k; ++t) {
    const double v = mul_mod(ax[t], bx[t], p[t], pinv[t]) + mul_mod(ay[t], by[t], p[t], pinv[t]) - p[t];
    const double r = v + p[t] * (0.5 - std::copysign(0.5, v));
    key[t] = static_cast<std::uint32_t>(static_cast<std::int32_t>(r));
  }
}

class ResidueSet {
 public:
  explicit ResidueSet(const ResidueContext& ctx)
      : ctx_(&ctx), key_(ctx.k), slots_(1024, 0) {}

  void add(std::size_t i, std::size_t j) {
    const std::size_t k = ctx_->k;
    const bool y = ctx_->has_y;
    residue_dot(&ctx_->ax[i * k], &ctx_->bx[j * k], y ? &ctx_->ay[i * k] : nullptr, y ? &ctx_->by[j * k] : nullptr,
                ctx_->p.data(), ctx_->pinv.data(), key_.data(), k);
    insert(key_.data(), static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }

  void merge(ResidueSet&& other) {
    for (std::size_t v = 0; v < other.reps_.size(); ++v) {
      insert(&other.arena_[v * ctx_->k], other.reps_[v].first, other.reps_[v].second);
    }
  }

  std::size_t size() const { return reps_.size(); }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& representatives() const { return reps_; }

 private:
  static std::uint64_t hash_key(const std::uint32_t* key) {
    const std::uint64_t a = (static_cast<std::uint64_t>(key[0]) << 32) | key[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(key[2]) << 32) | key[3];
    return mix64(a ^ mix64(b));
  }

  void insert(const std::uint32_t* key, std::uint32_t i, std::uint32_t j) {
    const std::size_t k = ctx_->k;
    const std::uint64_t h = hash_key(key);
    std::size_t mask = slots_.size() - 1;
    std::size_t pos = h & mask;
    while (slots_[pos] != 0) {
      const std::uint32_t idx = slots_[pos] - 1;
      if (hashes_[idx] == h && std::memcmp(&arena_[idx * k], key, k * sizeof(std::uint32_t)) == 0) return;
      pos = (pos + 1) & mask;
    }
    arena_.insert(arena_.end(), key, key + k);
    reps_.emplace_back(i, j);
    hashes_.push_back(h);
    slots_[pos] = static_cast<std::uint32_t>(reps_.size());
    if (reps_.size() * 2 > slots_.size()) rehash();
  }

  void rehash() {
    std::vector<std::uint32_t> next(slots_.size() * 2, 0);
    const std::size_t mask = next.size() - 1;
    for (std::size_t idx = 0; idx < hashes_.size(); ++idx) {
      std::size_t pos = hashes_[idx] & mask;
      while (next[pos] != 0) pos = (pos + 1) & mask;
      next[pos] = static_cast<std::uint32_t>(idx + 1);
    }
    slots_.swap(next);
  }

  const ResidueContext* ctx_;
  std::vector<std::uint32_t> key_;
  std::vector<std::uint32_t> arena_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> reps_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint32_t> slots_;
};

bool all_zero(const std::vector<mpz_class>& v) {
  return std::all_of(v.begin(), v.end(), [](const mpz_class& z) { return z == 0; });
}

ResidueContext residue_context(const IntegerImage& image) {
  ResidueContext ctx;
  // |A - B| < 2^(2 bits + 2) for any two dot values; the modulus must exceed it.
  ctx.k = (2 * image.max_bits + 3 + kPrimeBitsFloor - 1) / kPrimeBitsFloor;
  ctx.k = std::max<std::size_t>(ctx.k, 4);
  const auto primes = residue_primes(ctx.k);
  for (auto p : primes) {
    ctx.p.push_back(static_cast<double>(p));
    ctx.pinv.push_back(1.0 / static_cast<double>(p));
  }
  ctx.has_y = !(all_zero(image.ay) || all_zero(image.by));
  ctx.ax = residue_table(image.ax, primes);
  ctx.bx = residue_table(image.bx, primes);
  if (ctx.has_y) {
    ctx.ay = residue_table(image.ay, primes);
    ctx.by = residue_table(image.by, primes);
  }
  return ctx;
}

bool fits_int128(const IntegerImage& image) { return image.max_bits <= 62; }

// ---------------------------------------------------------------------------
// Grid kernel

double grid_value(const DoublePoints& a, const DoublePoints& b, std::size_t i, std::size_t j) {
  return a.x[i] * b.x[j] + a.y[i] * b.y[j];
}

std::int64_t grid_key(double v, double quantum) {
  const double s = v / quantum;
  if (!(std::fabs(s) < 9.0e18)) throw UsageError("quantum too small for the dot value range");
  return std::llround(s);
}

class GridSet {
 public:
  GridSet(const DoublePoints& a, const DoublePoints& b, double quantum) : a_(&a), b_(&b), quantum_(quantum) {}
  void add(std::size_t i, std::size_t j) { put(grid_value(*a_, *b_, i, j)); }
  void put(double v) {
    auto [it, inserted] = cells_.try_emplace(grid_key(v, quantum_), v);
    if (!inserted && v < it->second) it->second = v;
  }
  void merge(GridSet&& other) {
    for (const auto& [key, v] : other.cells_) {
      auto [it, inserted] = cells_.try_emplace(key, v);
      if (!inserted && v < it->second) it->second = v;
    }
  }
  std::size_t size() const { return cells_.size(); }
  std::vector<double> sorted_values() const {
    std::vector<std::pair<std::int64_t, double>> cells(cells_.begin(), cells_.end());
    std::sort(cells.begin(), cells.end());
    std::vector<double> out;
    out.reserve(cells.size());
    for (const auto& c : cells) out.push_back(c.second);
    return out;
  }

 private:
  const DoublePoints* a_;
  const DoublePoints* b_;
  double quantum_;
  std::unordered_map<std::int64_t, double> cells_;
};

}  // namespace

unsigned resolve_threads(unsigned requested, std::size_t rows) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (rows < t) t = static_cast<unsigned>(std::max<std::size_t>(1, rows));
  return t;
}

std::vector<std::uint32_t> residue_primes(std::size_t count) {
  static std::mutex mu;
  static std::vector<std::uint32_t> cache;
  std::lock_guard lock(mu);
  if (cache.size() < count) {
    static std::vector<std::uint32_t> small;
    if (small.empty()) {
      std::vector<bool> composite(8193, false);
      for (std::uint32_t i = 2; i <= 8192; ++i) {
        if (composite[i]) continue;
        small.push_back(i);
        for (std::uint32_t j = i * i; j <= 8192; j += i) composite[j] = true;
      }
    }
    std::uint32_t candidate = cache.empty() ? (1u << 26) - 1 : cache.back() - 2;
    for (; cache.size() < count; candidate -= 2) {
      if (candidate < (1u << kPrimeBitsFloor)) throw UsageError("coordinates too large for the residue kernel");
      bool prime = true;
      for (auto d : small) {
        if (static_cast<std::uint64_t>(d) * d > candidate) break;
        if (candidate % d == 0) {
          prime = false;
          break;
        }
      }
      if (prime) cache.push_back(candidate);
    }
  }
  return {cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(count)};
}

IntegerImage integer_image(std::span<const Point> a, std::span<const Point> b) {
  IntegerImage img;
  img.denominator = 1;
  auto absorb = [&](std::span<const Point> pts) {
    for (const auto& p : pts) {
      mpz_lcm(img.denominator.get_mpz_t(), img.denominator.get_mpz_t(), p.x.rational().get_den_mpz_t());
      mpz_lcm(img.denominator.get_mpz_t(), img.denominator.get_mpz_t(), p.y.rational().get_den_mpz_t());
    }
  };
  absorb(a);
  absorb(b);
  auto scale = [&](const Scalar& s) {
    const mpq_class& q = s.rational();
    mpz_class v = q.get_num() * (img.denominator / q.get_den());
    img.max_bits = std::max<std::size_t>(img.max_bits, mpz_sizeinbase(v.get_mpz_t(), 2));
    return v;
  };
  for (const auto& p : a) {
    img.ax.push_back(scale(p.x));
    img.ay.push_back(scale(p.y));
  }
  for (const auto& p : b) {
    img.bx.push_back(scale(p.x));
    img.by.push_back(scale(p.y));
  }
  return img;
}

std::vector<mpz_class> distinct_integer_dots(const IntegerImage& image, PairShape shape, unsigned threads) {
  const std::size_t rows = image.ax.size();
  const std::size_t cols = image.bx.size();
  threads = resolve_threads(threads, rows);
  auto first_col = [shape](std::size_t r) { return shape == PairShape::UpperTriangle ? r : std::size_t{0}; };
  std::vector<mpz_class> out;
  if (fits_int128(image)) {
    const SmallImage small = small_image(image);
    const Int128Set set = run_partitioned<Int128Set>(
        rows, threads, [&] { return Int128Set(small); },
        [&](Int128Set& s, std::size_t r) {
          for (std::size_t c = first_col(r); c < cols; ++c) s.add(r, c);
        });
    std::vector<__int128> vals(set.values().begin(), set.values().end());
    std::sort(vals.begin(), vals.end());
    out.reserve(vals.size());
    for (auto v : vals) out.push_back(to_mpz(v));
    return out;
  }
  const ResidueContext ctx = residue_context(image);
  const ResidueSet set = run_partitioned<ResidueSet>(
      rows, threads, [&] { return ResidueSet(ctx); },
      [&](ResidueSet& s, std::size_t r) {
        for (std::size_t c = first_col(r); c < cols; ++c) s.add(r, c);
      });
  out.reserve(set.size());
  for (const auto& [i, j] : set.representatives()) {
    out.push_back(image.ax[i] * image.bx[j] + image.ay[i] * image.by[j]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> row_distinct_integer_dots(const IntegerImage& image, unsigned threads) {
  const std::size_t n = image.ax.size();
  std::vector<std::size_t> counts(n, 0);
  threads = resolve_threads(threads, n);
  if (fits_int128(image)) {
    const SmallImage small = small_image(image);
    run_rows(n, threads, [&](std::size_t r) {
      Int128Set s(small);
      for (std::size_t c = 0; c < n; ++c) s.add(r, c);
      counts[r] = s.size();
    });
    return counts;
  }
  const ResidueContext ctx = residue_context(image);
  run_rows(n, threads, [&](std::size_t r) {
    ResidueSet s(ctx);
    for (std::size_t c = 0; c < n; ++c) s.add(r, c);
    counts[r] = s.size();
  });
  return counts;
}

DoublePoints to_doubles(std::span<const Point> points) {
  DoublePoints d;
  d.x.reserve(points.size());
  d.y.reserve(points.size());
  for (const auto& p : points) {
    d.x.push_back(p.x.to_double());
    d.y.push_back(p.y.to_double());
  }
  return d;
}

std::vector<double> distinct_grid_dots(const DoublePoints& a, const DoublePoints& b, PairShape shape, double quantum,
                                       unsigned threads) {
  const std::size_t rows = a.x.size();
  const std::size_t cols = b.x.size();
  threads = resolve_threads(threads, rows);
  const GridSet set = run_partitioned<GridSet>(
      rows, threads, [&] { return GridSet(a, b, quantum); },
      [&](GridSet& s, std::size_t r) {
        for (std::size_t c = shape == PairShape::UpperTriangle ? r : 0; c < cols; ++c) s.add(r, c);
      });
  return set.sorted_values();
}

std::vector<std::size_t> row_distinct_grid_dots(const DoublePoints& a, double quantum, unsigned threads) {
  const std::size_t n = a.x.size();
  std::vector<std::size_t> counts(n, 0);
  threads = resolve_threads(threads, n);
  run_rows(n, threads, [&](std::size_t r) {
    std::unordered_set<std::int64_t> keys;
    for (std::size_t c = 0; c < n; ++c) keys.insert(grid_key(grid_value(a, a, r, c), quantum));
    counts[r] = keys.size();
  });
  return counts;
}

}  // namespace dotprod::detail

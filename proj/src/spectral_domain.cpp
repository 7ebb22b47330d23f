#include "nodal/spectral_domain.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nodal/errors.hpp"
#include "nodal/parallel.hpp"
#include "nodal/special.hpp"

namespace nodal {

namespace {

constexpr std::uint64_t kChunk = 1 << 16;

// sum of a over all exponent vectors a in N^n with |a| = total, calling f(a)
template <class F>
void for_each_composition(int n, int total, F&& f) {
  std::vector<int> a(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      a[pos] = left;
      f(a);
      return;
    }
    for (int v = left; v >= 0; --v) {
      a[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, total);
}

// ln of the ball integral of prod xi_j^{2 a_j}
double log_ball_monomial(int n, double r, const std::vector<int>& a) {
  int A = 0;
  double s = std::log(2.0);
  for (int aj : a) {
    A += aj;
    s += std::lgamma(aj + 0.5);
  }
  s -= std::lgamma(A + 0.5 * n);
  s += (n + 2 * A) * std::log(r) - std::log(static_cast<double>(n + 2 * A));
  return s;
}

double log_multinomial(const std::vector<int>& a) {
  int A = 0;
  double s = 0.0;
  for (int aj : a) {
    A += aj;
    s -= log_factorial(aj);
  }
  return s + log_factorial(A);
}

struct Accum {
  double sum = 0.0, sumsq = 0.0;
};

}  // namespace

SymbolBody SymbolBody::ball(int n, double radius) {
  SymbolBody b;
  b.n_ = n;
  b.kind_ = Kind::ball;
  b.radius_ = radius;
  if (n < 1 || !(radius > 0)) throw PreconditionError("ball body: need n >= 1 and radius > 0");
  b.nu_ = LogReal::from_log(log_ball_volume(n, radius));
  b.d_ = radius;
  b.c_inner_ = radius;
  b.d_outer_ = radius;
  b.validate();
  return b;
}

SymbolBody SymbolBody::lp_ball(int n, double p, double radius) {
  SymbolBody b;
  b.n_ = n;
  b.kind_ = Kind::lp_ball;
  b.p_ = p;
  b.radius_ = radius;
  if (n < 1 || !(radius > 0) || !(p >= 1)) throw PreconditionError("lp body: need n >= 1, p >= 1, radius > 0");
  b.nu_ = LogReal::from_log(n * std::log(2.0 * radius * std::tgamma(1.0 + 1.0 / p)) -
                            std::lgamma(1.0 + n / p));
  b.d_ = p >= 2 ? radius * std::pow(n, 0.5 - 1.0 / p) : radius;
  // largest inscribed Euclidean radius
  b.c_inner_ = p >= 2 ? radius : radius * std::pow(n, 1.0 / p - 0.5);
  b.d_outer_ = b.d_;
  b.validate();
  return b;
}

SymbolBody SymbolBody::annulus_bounded(int n, double c_inner, double d_outer, const SymbolBody& sampler) {
  if (sampler.kind() == Kind::annulus_bounded) throw PreconditionError("annulus body: nested sandwich");
  if (sampler.n() != n) throw PreconditionError("annulus body: sampler dimension mismatch");
  if (!(c_inner > 0 && c_inner <= d_outer)) throw PreconditionError("annulus body: need 0 < c <= d");
  if (sampler.d() > d_outer * (1 + 1e-12)) throw PreconditionError("annulus body: sampler leaves B(0,d)");
  if (sampler.c_inner() < c_inner * (1 - 1e-12)) throw PreconditionError("annulus body: B(0,c) not inside sampler");
  SymbolBody b;
  b.n_ = n;
  b.kind_ = Kind::annulus_bounded;
  b.c_inner_ = c_inner;
  b.d_outer_ = d_outer;
  b.sampler_ = std::make_shared<SymbolBody>(sampler);
  b.nu_ = sampler.nu();
  b.d_ = d_outer;
  b.validate();
  return b;
}

void SymbolBody::validate() const {
  if (nu_.is_zero()) throw PreconditionError("symbol body: zero volume");
  // a ball of volume nu must fit within radius d
  double r_eq = std::exp((nu_.log() - log_ball_volume(n_, 1.0)) / n_);
  if (d_ < r_eq * (1 - 1e-12)) throw PreconditionError("symbol body: d(K) smaller than the volume radius");
}

bool SymbolBody::contains(std::span<const double> xi) const {
  switch (kind_) {
    case Kind::ball: {
      double s = 0;
      for (double v : xi) s += v * v;
      return s <= radius_ * radius_;
    }
    case Kind::lp_ball: {
      double s = 0;
      for (double v : xi) s += std::pow(std::abs(v) / radius_, p_);
      return s <= 1.0;
    }
    case Kind::annulus_bounded: return sampler_->contains(xi);
  }
  return false;
}

LogReal ball_moment(int n, double r, const MultiIndex& idx) {
  if (n < 1) throw PreconditionError("ball_moment: n must be >= 1");
  if (!(r > 0)) throw PreconditionError("ball_moment: r must be > 0");
  std::vector<int> a(n, 0);
  for (int j : idx) {
    if (j < 1 || j > n) throw PreconditionError("ball_moment: index out of range");
    ++a[j - 1];
  }
  return LogReal::from_log(log_ball_monomial(n, r, a));
}

MomentEstimate moment_mc(const SymbolBody& body, const MultiIndex& idx, std::uint64_t samples,
                         std::uint64_t seed, int threads) {
  const int n = body.n();
  for (int j : idx)
    if (j < 1 || j > n) throw PreconditionError("moment_mc: index out of range");
  if (samples == 0) throw PreconditionError("moment_mc: zero samples");
  const double d = body.d();
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  struct ChunkOut {
    Accum acc;
    std::uint64_t hits = 0;
  };
  std::vector<ChunkOut> out(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(seed, c));
    std::uniform_real_distribution<double> U(-d, d);
    std::uint64_t m = std::min<std::uint64_t>(kChunk, samples - c * kChunk);
    std::vector<double> xi(n);
    ChunkOut o;
    for (std::uint64_t s = 0; s < m; ++s) {
      for (auto& v : xi) v = U(rng);
      if (!body.contains(xi)) continue;
      ++o.hits;
      double g = 1.0;
      for (int j : idx) g *= xi[j - 1] * xi[j - 1];
      o.acc.sum += g;
      o.acc.sumsq += g * g;
    }
    out[c] = o;
  }, threads);

  Accum tot;
  std::uint64_t hits = 0;
  for (const auto& o : out) {
    tot.sum += o.acc.sum;
    tot.sumsq += o.acc.sumsq;
    hits += o.hits;
  }
  double acc_rate = static_cast<double>(hits) / samples;
  if (acc_rate < 1e-4) throw NumericalError("moment_mc: acceptance rate below 1e-4 (degenerate body)");
  double vbox = std::pow(2 * d, n);
  double N = static_cast<double>(samples);
  double mean = tot.sum / N;
  double var = std::max(0.0, tot.sumsq / N - mean * mean);
  return {LogReal::from_value(vbox * mean), vbox * std::sqrt(var / N), acc_rate};
}

Extents symbol_extents(const SymbolBody& body) { return {body.nu(), body.d()}; }

MomentTable moment_table(const SymbolBody& body, const MomentOptions& opt) {
  const int n = body.n();
  const int k = static_cast<int>(std::floor(n / 2.0 + 1.0));
  MomentTable t;
  t.n = n;
  t.k = k;
  t.S.resize(k + 1);
  t.T.assign(n, std::vector<MomentBand>(k + 1));

  if (body.is_ball()) {
    const double r = body.radius();
    for (int i = 0; i <= k; ++i) {
      LogReal s;
      std::vector<LogReal> tj(n);
      for_each_composition(n, i, [&](const std::vector<int>& a) {
        double lm = log_multinomial(a);
        s += LogReal::from_log(lm + log_ball_monomial(n, r, a));
        for (int j = 0; j < n; ++j) {
          std::vector<int> b = a;
          ++b[j];
          tj[j] += LogReal::from_log(lm + log_ball_monomial(n, r, b));
        }
      });
      t.S[i] = {s, s, s};
      for (int j = 0; j < n; ++j) t.T[j][i] = {tj[j], tj[j], tj[j]};
    }
    return t;
  }

  // Monte Carlo: sum over ordered tuples of prod xi^2 equals |xi|^{2i}
  t.exact = false;
  const int q = (k + 1) * (n + 1);
  const double d = body.d();
  const std::uint64_t samples = opt.mc_samples;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::vector<Accum>> out(chunks, std::vector<Accum>(q));
  std::vector<std::uint64_t> hits(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    std::mt19937_64 rng(derive_seed(opt.seed, c));
    std::uniform_real_distribution<double> U(-d, d);
    std::uint64_t m = std::min<std::uint64_t>(kChunk, samples - c * kChunk);
    std::vector<double> xi(n);
    auto& acc = out[c];
    for (std::uint64_t s = 0; s < m; ++s) {
      for (auto& v : xi) v = U(rng);
      if (!body.contains(xi)) continue;
      ++hits[c];
      double r2 = 0;
      for (double v : xi) r2 += v * v;
      double g = 1.0;
      for (int i = 0; i <= k; ++i, g *= r2) {
        acc[i * (n + 1)].sum += g;
        acc[i * (n + 1)].sumsq += g * g;
        for (int j = 0; j < n; ++j) {
          double h = g * xi[j] * xi[j];
          acc[i * (n + 1) + 1 + j].sum += h;
          acc[i * (n + 1) + 1 + j].sumsq += h * h;
        }
      }
    }
  }, opt.threads);

  std::uint64_t tot_hits = 0;
  for (auto h : hits) tot_hits += h;
  if (static_cast<double>(tot_hits) / samples < 1e-4)
    throw NumericalError("moment_table: acceptance rate below 1e-4 (degenerate body)");
  const double vbox = std::pow(2 * d, n), N = static_cast<double>(samples);
  for (int i = 0; i <= k; ++i) {
    for (int slot = 0; slot <= n; ++slot) {
      Accum a;
      for (const auto& o : out) {
        a.sum += o[i * (n + 1) + slot].sum;
        a.sumsq += o[i * (n + 1) + slot].sumsq;
      }
      double mean = a.sum / N;
      double se = vbox * std::sqrt(std::max(0.0, a.sumsq / N - mean * mean) / N);
      double v = vbox * mean;
      MomentBand band{LogReal::from_value(v), LogReal::from_value(std::max(0.0, v - 3 * se)),
                      LogReal::from_value(v + 3 * se)};
      if (slot == 0) t.S[i] = band;
      else t.T[slot - 1][i] = band;
    }
  }
  return t;
}

}  // namespace nodal

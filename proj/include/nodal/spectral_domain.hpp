#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "nodal/log_real.hpp"

namespace nodal {

// Coordinate indices j_1..j_i, 1-based, repetition allowed.
using MultiIndex = std::vector<int>;

// Symmetric radially bounded body K in R^n.
//   ball:            {|xi| <= radius}
//   lp_ball:         {sum |xi_j|^p <= radius^p}, an explicit sampler with exact volume
//   annulus_bounded: sandwich B(0,c) in K in B(0,d); membership delegated to an
//                    inner sampler body (ball or lp_ball)
class SymbolBody {
 public:
  enum class Kind { ball, annulus_bounded, lp_ball };

  static SymbolBody ball(int n, double radius);
  static SymbolBody lp_ball(int n, double p, double radius);
  static SymbolBody annulus_bounded(int n, double c_inner, double d_outer, const SymbolBody& sampler);

  int n() const { return n_; }
  Kind kind() const { return kind_; }
  double radius() const { return radius_; }
  double p() const { return p_; }
  double c_inner() const { return c_inner_; }
  double d_outer() const { return d_outer_; }
  const SymbolBody* sampler() const { return sampler_.get(); }

  LogReal nu() const { return nu_; }
  double d() const { return d_; }
  bool contains(std::span<const double> xi) const;
  bool is_ball() const { return kind_ == Kind::ball; }

 private:
  SymbolBody() = default;
  void validate() const;

  int n_ = 0;
  Kind kind_ = Kind::ball;
  double radius_ = 0.0, p_ = 2.0, c_inner_ = 0.0, d_outer_ = 0.0;
  std::shared_ptr<const SymbolBody> sampler_;
  LogReal nu_;
  double d_ = 0.0;
};

// Exact integral over B(0, r) of prod_k xi_{j_k}^2.
LogReal ball_moment(int n, double r, const MultiIndex& idx);

struct MomentEstimate {
  LogReal estimate;
  double stderr_ = 0.0;
  double acceptance = 0.0;
};

// Rejection-sampling estimate in the box [-d, d]^n.  Samples are split into
// fixed-size chunks with derived seeds, so the result is independent of the
// worker count.
MomentEstimate moment_mc(const SymbolBody& body, const MultiIndex& idx, std::uint64_t samples,
                         std::uint64_t seed, int threads = 0);

struct Extents {
  LogReal nu;
  double d = 0.0;
};
Extents symbol_extents(const SymbolBody& body);

// Moment sums feeding rho_K and theta_K^j, i = 0..k with k = floor(n/2 + 1):
//   S[i]    = sum over ordered (j_1..j_i) of int_K prod xi_{j_k}^2
//   T[j][i] = same with an extra xi_{j+1}^2 factor
// For MC bodies lower/upper carry +-3 stderr.
struct MomentBand {
  LogReal value, lower, upper;
};
struct MomentTable {
  int n = 0;
  int k = 0;
  std::vector<MomentBand> S;
  std::vector<std::vector<MomentBand>> T;
  bool exact = true;
};

struct MomentOptions {
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  int threads = 0;
};

MomentTable moment_table(const SymbolBody& body, const MomentOptions& opt = {});

}  // namespace nodal

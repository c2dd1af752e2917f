#include "sgls/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "sgls/errors.hpp"
#include "sgls/parallel.hpp"

namespace sgls {

namespace {

constexpr std::size_t kSumBlock = 4096;
// Samples are grouped by floor(-log(|g|/M)); a sample with p log(|g|/M) < -kCutoff
// changes the sum by less than e^-kCutoff of the total weight and is skipped.
constexpr int kBuckets = 64;
constexpr double kCutoff = 60.0;
// Refinement stops (as non-convergence) before a level exceeds this many samples.
constexpr std::size_t kMaxLevelSamples = std::size_t{1} << 24;

void check_exponent(double p) {
  if (!std::isfinite(p) || !(p >= 1.0))
    throw Error(ErrorCode::exponent, "L_p exponent must be finite and >= 1, got " + std::to_string(p));
}

}  // namespace

void QuadratureSpec::validate() const {
  if (panels_per_axis < 1) throw Error(ErrorCode::config, "panels_per_axis must be >= 1");
  if (nodes_per_panel < 2) throw Error(ErrorCode::config, "nodes_per_panel must be >= 2");
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::config, "rel_tol must be > 0");
  if (max_refinements < 1) throw Error(ErrorCode::config, "max_refinements must be >= 1");
}

double tail_tolerance(const QuadratureSpec& spec) noexcept { return spec.rel_tol / 10.0; }

GaussLegendreRule gauss_legendre(int n) {
  if (n < 1) throw Error(ErrorCode::config, "Gauss-Legendre order must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

LpSampler::LpSampler(Integrand g, std::vector<Box> region, QuadratureSpec spec)
    : g_(std::move(g)), region_(std::move(region)), spec_(spec) {
  spec_.validate();
  if (region_.empty()) throw Error(ErrorCode::domain, "empty integration region");
  const int d = region_.front().dim();
  if (d < 1 || d > kMaxDim) throw Error(ErrorCode::dimension, "bad region dimension");
  for (const auto& b : region_)
    if (b.dim() != d) throw Error(ErrorCode::dimension, "region boxes differ in dimension");
  rule_ = gauss_legendre(spec_.nodes_per_panel);
}

const LpSampler::Level& LpSampler::level(int r) const {
  while (static_cast<int>(levels_.size()) <= r) {
    const int lv = static_cast<int>(levels_.size());
    const std::size_t panels = static_cast<std::size_t>(spec_.panels_per_axis) << lv;
    const std::size_t q = rule_.nodes.size();
    const std::size_t per_axis = panels * q;
    const auto d = static_cast<std::size_t>(region_.front().dim());
    std::size_t per_box = 1;
    for (std::size_t j = 0; j < d; ++j) per_box *= per_axis;

    Level out;
    std::vector<double> mags;
    std::vector<double> wts;
    mags.reserve(per_box * region_.size());
    wts.reserve(per_box * region_.size());

    for (const Box& box : region_) {
      // Per-axis node coordinates and weights.
      std::array<std::vector<double>, kMaxDim> xs;
      std::array<std::vector<double>, kMaxDim> ws;
      for (std::size_t j = 0; j < d; ++j) {
        const double width = (box.upper[j] - box.lower[j]) / static_cast<double>(panels);
        xs[j].resize(per_axis);
        ws[j].resize(per_axis);
        for (std::size_t k = 0; k < panels; ++k) {
          const double left = box.lower[j] + width * static_cast<double>(k);
          for (std::size_t i = 0; i < q; ++i) {
            xs[j][k * q + i] = left + 0.5 * width * (rule_.nodes[i] + 1.0);
            ws[j][k * q + i] = 0.5 * width * rule_.weights[i];
          }
        }
      }
      const std::size_t offset = mags.size();
      mags.resize(offset + per_box);
      wts.resize(offset + per_box);
      parallel_for(per_box, 2048, [&](std::size_t begin, std::size_t end) {
        std::array<double, kMaxDim> x{};
        for (std::size_t flat = begin; flat < end; ++flat) {
          std::size_t rem = flat;
          double w = 1.0;
          for (std::size_t j = d; j-- > 0;) {
            const std::size_t idx = rem % per_axis;
            rem /= per_axis;
            x[j] = xs[j][idx];
            w *= ws[j][idx];
          }
          mags[offset + flat] = std::abs(g_(Point(x.data(), d)));
          wts[offset + flat] = w;
        }
      });
    }

    for (double m : mags) {
      if (std::isnan(m)) throw Error(ErrorCode::inconsistency, "integrand evaluated to NaN");
      out.max_abs = std::max(out.max_abs, m);
    }
    if (!std::isfinite(out.max_abs))
      throw Error(ErrorCode::inconsistency, "integrand is not finite on the region");
    if (out.max_abs > 0.0) {
      std::vector<double> lr(mags.size());
      std::vector<int> bucket(mags.size(), -1);
      std::array<std::size_t, kBuckets + 1> count{};
      for (std::size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] == 0.0) continue;
        lr[i] = std::log(mags[i] / out.max_abs);
        bucket[i] = static_cast<int>(std::min(-lr[i], static_cast<double>(kBuckets - 1)));
        ++count[static_cast<std::size_t>(bucket[i]) + 1];
      }
      for (int b = 0; b < kBuckets; ++b) count[b + 1] += count[b];
      out.bucket_end.assign(count.begin() + 1, count.end());
      out.weights.resize(count[kBuckets]);
      out.log_ratio.resize(count[kBuckets]);
      // stable counting sort keeps the sample order inside each bucket
      for (std::size_t i = 0; i < mags.size(); ++i) {
        if (bucket[i] < 0) continue;
        const std::size_t at = count[static_cast<std::size_t>(bucket[i])]++;
        out.weights[at] = wts[i];
        out.log_ratio[at] = lr[i];
      }
    }
    levels_.push_back(std::move(out));
  }
  return levels_[static_cast<std::size_t>(r)];
}

std::size_t LpSampler::level_samples(int r) const {
  const std::size_t per_axis =
      (static_cast<std::size_t>(spec_.panels_per_axis) << r) * rule_.nodes.size();
  std::size_t n = region_.size();
  for (int j = 0; j < region_.front().dim(); ++j) {
    if (n > kMaxLevelSamples) return n;
    n *= per_axis;
  }
  return n;
}

double LpSampler::level_norm(const Level& lv, double p) const {
  if (lv.max_abs == 0.0) return 0.0;
  const auto last = static_cast<std::size_t>(std::min(kCutoff / p, static_cast<double>(kBuckets - 1)));
  const std::size_t n = lv.bucket_end[last];
  const std::size_t blocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(blocks, 0.0);
  // Fixed blocks summed in order: identical results for any thread count.
  parallel_for(blocks, 4, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const std::size_t lo = b * kSumBlock;
      const std::size_t hi = std::min(n, lo + kSumBlock);
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const double e = p * lv.log_ratio[i];
        if (e > -745.0) s += lv.weights[i] * std::exp(e);
      }
      partial[b] = s;
    }
  });
  double sum = 0.0;
  for (double s : partial) sum += s;
  if (sum <= 0.0) return 0.0;
  return lv.max_abs * std::exp(std::log(sum) / p);
}

LpEstimate LpSampler::norm(double p) const {
  check_exponent(p);
  LpEstimate est;
  const Level& first = level(0);
  double prev = level_norm(first, p);
  est.history.push_back(prev);
  if (first.max_abs == 0.0) {
    est.value = 0.0;
    return est;
  }
  for (int r = 1; r <= spec_.max_refinements; ++r) {
    if (level_samples(r) > kMaxLevelSamples) {
      const auto& h = est.history;
      throw ConvergenceError(h.size() > 1 ? h[h.size() - 2] : h.back(), h.back(), r - 1);
    }
    const double cur = level_norm(level(r), p);
    est.history.push_back(cur);
    if (std::abs(cur - prev) <= spec_.rel_tol * std::abs(cur)) {
      est.value = cur;
      return est;
    }
    prev = cur;
  }
  const auto& h = est.history;
  throw ConvergenceError(h[h.size() - 2], h.back(), spec_.max_refinements);
}

LpEstimate lp_norm(const std::function<double(Point)>& f_abs, double p, const Box& box,
                   const QuadratureSpec& spec) {
  check_exponent(p);
  return LpSampler(f_abs, {box}, spec).norm(p);
}

LpSampler make_derivative_sampler(const Field& field, const MultiIndex& alpha,
                                  const HalfSpaceDomain& domain, const QuadratureSpec& spec) {
  if (alpha.order() > field.max_order())
    throw Error(ErrorCode::order, "requested " + alpha.to_string() + " but field '" +
                                      field.label() + "' has max order " +
                                      std::to_string(field.max_order()));
  if (alpha.dim() != field.dim()) throw Error(ErrorCode::dimension, "multi-index dimension mismatch");
  auto region = domain.regions(field, tail_tolerance(spec));
  return LpSampler([field, alpha](Point x) { return field.derivative(alpha, x); },
                   std::move(region), spec);
}

LpEstimate lp_norm_halfspace(const Field& field, const MultiIndex& alpha, double p,
                             const HalfSpaceDomain& domain, const QuadratureSpec& spec) {
  check_exponent(p);
  auto est = make_derivative_sampler(field, alpha, domain, spec).norm(p);
  est.tail_bound = domain.truncation_box ? 0.0 : tail_tolerance(spec);
  return est;
}

}  // namespace sgls

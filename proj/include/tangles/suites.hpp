#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tangles/constraints.hpp"
#include "tangles/ghz_class.hpp"
#include "tangles/haar.hpp"
#include "tangles/measures.hpp"

namespace tangles {

struct SuiteConfig {
  std::uint64_t seed = 20240801;
  std::size_t samples = 10000;
  double tol = -1.0;  // negative: use the suite's own default
  int workers = 1;
  int n = 3;  // party count, honored by the suites that scale
};

struct SuiteResult {
  std::string name;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int n = 3;
  double tol = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_margin = -std::numeric_limits<double>::infinity();
  double mean_margin = 0.0;
  std::uint64_t argmin_index = 0;
  std::string worst_input;  // JSON text identifying the argmin input
  std::size_t violations = 0;  // samples with margin < -tol
  bool passed = true;
};

namespace detail {

inline constexpr int kSuiteChunks = 256;

inline std::string haar_input_json(int n, std::uint64_t seed, std::uint64_t index) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "{\"kind\":\"haar\",\"n\":%d,\"seed\":%llu,\"index\":%llu}", n,
                static_cast<unsigned long long>(seed), static_cast<unsigned long long>(index));
  return buf;
}

inline std::string factored_input_json(int n, std::uint64_t seed, std::uint64_t index) {
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "{\"kind\":\"haar-with-factors\",\"n\":%d,\"seed\":%llu,\"state_index\":%llu,"
                "\"factor_index\":%llu}",
                n, static_cast<unsigned long long>(seed), static_cast<unsigned long long>(2 * index),
                static_cast<unsigned long long>(2 * index + 1));
  return buf;
}

// Deterministic chunked reduction: sample i draws only from streams keyed by
// i, and chunk partials are folded in chunk order, so every statistic is
// bit-identical for any worker count.
template <typename MarginFn, typename DescribeFn>
SuiteResult run_margin_suite(const std::string& name, const SuiteConfig& cfg, double default_tol,
                             MarginFn&& margin_of, DescribeFn&& describe) {
  SuiteResult out;
  out.name = name;
  out.samples = cfg.samples;
  out.seed = cfg.seed;
  out.n = cfg.n;
  out.tol = cfg.tol >= 0.0 ? cfg.tol : default_tol;
  if (cfg.samples == 0) {
    out.mean_margin = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  struct Partial {
    double min_margin = std::numeric_limits<double>::infinity();
    double max_margin = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::uint64_t argmin = 0;
    std::size_t violations = 0;
    std::exception_ptr error;
  };
  std::vector<Partial> partials(kSuiteChunks);
  const std::size_t per = (cfg.samples + kSuiteChunks - 1) / kSuiteChunks;
  std::atomic<int> next{0};
  const double tol = out.tol;

  auto work = [&]() {
    for (int c = next.fetch_add(1); c < kSuiteChunks; c = next.fetch_add(1)) {
      Partial& p = partials[c];
      const std::size_t lo = static_cast<std::size_t>(c) * per;
      const std::size_t hi = std::min(lo + per, cfg.samples);
      try {
        for (std::size_t i = lo; i < hi; ++i) {
          const double m = margin_of(static_cast<std::uint64_t>(i));
          if (m < p.min_margin) {
            p.min_margin = m;
            p.argmin = i;
          }
          p.max_margin = std::max(p.max_margin, m);
          p.sum += m;
          if (m < -tol) ++p.violations;
        }
      } catch (...) {
        p.error = std::current_exception();
        return;
      }
    }
  };

  int workers = cfg.workers;
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (hw > 0 && workers > hw) workers = hw;
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  double sum = 0.0;
  for (const Partial& p : partials) {
    if (p.error) std::rethrow_exception(p.error);
    if (p.min_margin < out.min_margin) {
      out.min_margin = p.min_margin;
      out.argmin_index = p.argmin;
    }
    out.max_margin = std::max(out.max_margin, p.max_margin);
    sum += p.sum;
    out.violations += p.violations;
  }
  out.mean_margin = sum / static_cast<double>(cfg.samples);
  out.worst_input = describe(out.argmin_index);
  out.passed = out.violations == 0;
  return out;
}

// 2x2 factor with iid Gaussian entries, Frobenius-normalized; redrawn while
// nearly singular so inverses and determinant ratios stay well conditioned.
inline Matrix random_factor(RandomStream& rng, bool unit_det) {
  while (true) {
    Matrix m(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m(i, j) = rng.gaussian_cplx();
    const double fn = m.frobenius_norm();
    if (fn < 1e-6) continue;
    m *= cplx(1.0 / fn);
    const cplx det = det2(m);
    if (std::abs(det) < 1e-2) continue;
    if (unit_det) m *= cplx(1.0) / std::sqrt(det);
    return m;
  }
}

inline GhzClassParams random_ghz_params(int n, std::uint64_t seed, std::uint64_t index) {
  RandomStream rng(seed, index);
  GhzClassParams params;
  params.n = n;
  params.r = 1.0 + 2.0 * rng.u01();
  params.phis.resize(n);
  for (double& phi : params.phis) phi = rng.u01() * std::numbers::pi / 2;
  params.kappa = 2.0 * rng.u01() - 1.0;
  return params;
}

inline std::string params_input_json(const GhzClassParams& p) {
  std::string phis;
  char buf[64];
  for (int q = 0; q < p.n; ++q) {
    std::snprintf(buf, sizeof(buf), q ? ",%.17g" : "%.17g", p.phis[q]);
    phis += buf;
  }
  std::string out = "{\"kind\":\"ghz-params\",\"n\":" + std::to_string(p.n);
  std::snprintf(buf, sizeof(buf), ",\"r\":%.17g", p.r);
  out += buf;
  out += ",\"phis\":[" + phis + "]";
  std::snprintf(buf, sizeof(buf), ",\"kappa\":%.17g}", p.kappa);
  out += buf;
  return out;
}

inline double ckw_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(3, cfg.seed, i);
  const TangleTuple tt = tangle_tuple(psi);
  const double pair2[3] = {tt.y * tt.y + tt.z * tt.z, tt.x * tt.x + tt.z * tt.z,
                           tt.x * tt.x + tt.y * tt.y};
  double worst = 0.0;
  for (int party = 0; party < 3; ++party) {
    const double ta = one_tangle(psi, party);
    worst = std::max(worst, std::abs(ta * ta - pair2[party] - tt.t * tt.t));
  }
  return -worst;
}

inline double assistance_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(3, cfg.seed, i);
  const double t = 2.0 * std::sqrt(std::abs(hyperdeterminant(psi)));
  const EpsilonOperator& theta = build_theta(2, Parity::even);
  double worst = 0.0;
  for (const auto& pair : {std::vector<int>{0, 1}, {0, 2}, {1, 2}}) {
    const DensityMatrix d = partial_trace(psi, pair);
    const RootPair roots = wootters_roots(d.rho, theta);
    worst = std::max(worst,
                     std::abs(t * t - (roots.concave * roots.concave - roots.convex * roots.convex)));
  }
  return -worst;
}

inline double sl_invariance_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(cfg.n, cfg.seed, 2 * i);
  RandomStream rng(cfg.seed, 2 * i + 1);
  std::vector<LocalFactor> ops;
  for (int p = 0; p < cfg.n; ++p) ops.push_back(random_factor(rng, true));
  const Ket mapped_raw = apply_factors(ops, psi);
  const double p = norm2(mapped_raw);
  const Ket mapped = normalized(mapped_raw);
  double worst = std::abs(k_tangle_pure(psi) - p * k_tangle_pure(mapped));
  if (cfg.n == 3) {
    // Operators confined to a subset leave that subset's tangles invariant
    // too, up to the same success weight.
    std::vector<LocalFactor> one = {ops[0], Matrix::identity(2), Matrix::identity(2)};
    const Ket m1_raw = apply_factors(one, psi);
    const double p1 = norm2(m1_raw);
    const Ket m1 = normalized(m1_raw);
    worst = std::max(worst, std::abs(one_tangle(psi, 0) - p1 * one_tangle(m1, 0)));
    std::vector<LocalFactor> two = {ops[0], ops[1], Matrix::identity(2)};
    const Ket m2_raw = apply_factors(two, psi);
    const double p2 = norm2(m2_raw);
    const Ket m2 = normalized(m2_raw);
    worst = std::max(worst, std::abs(two_tangle(partial_trace(psi, {0, 1})) -
                                     p2 * two_tangle(partial_trace(m2, {0, 1}))));
  }
  return -worst;
}

inline double gl_covariance_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(cfg.n, cfg.seed, 2 * i);
  RandomStream rng(cfg.seed, 2 * i + 1);
  std::vector<LocalFactor> ops;
  double prod_adet = 1.0;
  for (int p = 0; p < cfg.n; ++p) {
    ops.push_back(random_factor(rng, false));
    prod_adet *= std::abs(det2(ops.back()));
  }
  const Ket mapped_raw = apply_factors(ops, psi);
  const double p = norm2(mapped_raw);
  const Ket mapped = normalized(mapped_raw);
  return -std::abs(p * k_tangle_pure(mapped) - prod_adet * k_tangle_pure(psi));
}

inline double steiner_suite_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(3, cfg.seed, i);
  const TangleTuple tt = tangle_tuple(psi);
  const double convex = steiner_margin(tt.x, tt.y, tt.z, RoofMode::convex);
  const double xh = std::sqrt(tt.x * tt.x + tt.t * tt.t);
  const double yh = std::sqrt(tt.y * tt.y + tt.t * tt.t);
  const double zh = std::sqrt(tt.z * tt.z + tt.t * tt.t);
  const double concave = steiner_margin(xh, yh, zh, RoofMode::concave);
  return std::min(convex, concave);
}

inline double eigenvalue_loop_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(3, cfg.seed, i);
  const TangleTuple tt = tangle_tuple(psi);
  const double la = eigenvalue_from_tangles(tt.y, tt.z, tt.t);
  const double lb = eigenvalue_from_tangles(tt.x, tt.z, tt.t);
  const double lc = eigenvalue_from_tangles(tt.x, tt.y, tt.t);
  const auto back = tangles_from_eigenvalues(la, lb, lc, tt.t);
  // compared on squares: the loop is algebraically exact there, with no
  // square-root amplification near zero
  const double worst = std::max({std::abs(back[0] * back[0] - tt.x * tt.x),
                                 std::abs(back[1] * back[1] - tt.y * tt.y),
                                 std::abs(back[2] * back[2] - tt.z * tt.z)});
  return -worst;
}

inline double triangle_suite_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(3, cfg.seed, i);
  double lam[3];
  for (int p = 0; p < 3; ++p) {
    const double tau = one_tangle(psi, p);
    lam[p] = 0.5 * (1.0 - std::sqrt(std::max(1.0 - tau * tau, 0.0)));
  }
  const TriangleMargins tm = marginal_triangle_margins(lam[0], lam[1], lam[2]);
  return std::min({tm.margins[0], tm.margins[1], tm.margins[2]});
}

inline double kchain_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const Ket psi = haar_random_ket(cfg.n, cfg.seed, i);
  double worst = 0.0;
  for (int removed = 0; removed < cfg.n; ++removed)
    worst = std::max(worst, pure_k_to_km1(psi, removed, false).defect);
  return -worst;
}

inline double strong_monogamy_margin(std::uint64_t i, const SuiteConfig& cfg) {
  const GhzClassParams params = random_ghz_params(cfg.n, cfg.seed, i);
  double worst = 0.0;
  for (int party = 0; party < cfg.n; ++party)
    worst = std::max(worst, strong_monogamy_residual(params, party));
  return -worst;
}

inline void require_n(const SuiteConfig& cfg, int lo, int hi, const char* suite) {
  if (cfg.n < lo || cfg.n > hi)
    throw std::domain_error(std::string(suite) + ": party count outside [" + std::to_string(lo) +
                            "," + std::to_string(hi) + "]");
}

}  // namespace detail

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "necessity",  "ckw",      "assistance",      "sl-invariance", "gl-covariance",
      "steiner",    "triangle", "eigenvalue-loop", "kchain",        "strong-monogamy"};
  return names;
}

inline double suite_default_tol(const std::string& name) {
  if (name == "ckw" || name == "assistance" || name == "sl-invariance" || name == "steiner" ||
      name == "kchain")
    return 1e-8;
  return 1e-9;
}

// Margin-valued Monte Carlo suites; a sample is a violation when its margin
// drops below -tol. Identity-style suites report -|residual|.
inline SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
  const double tol = suite_default_tol(name);
  auto haar3 = [&](std::uint64_t i) { return detail::haar_input_json(3, cfg.seed, i); };
  auto haarn = [&](std::uint64_t i) { return detail::haar_input_json(cfg.n, cfg.seed, i); };
  auto factored = [&](std::uint64_t i) { return detail::factored_input_json(cfg.n, cfg.seed, i); };
  if (name == "necessity") {
    return detail::run_margin_suite(
        name, cfg, tol,
        [&](std::uint64_t i) {
          const Ket psi = haar_random_ket(3, cfg.seed, i);
          const TangleTuple tt = tangle_tuple(psi);
          return achievability_lhs(tt.x, tt.y, tt.z, tt.t);
        },
        haar3);
  }
  if (name == "ckw")
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::ckw_margin(i, cfg); }, haar3);
  if (name == "assistance")
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::assistance_margin(i, cfg); }, haar3);
  if (name == "sl-invariance") {
    detail::require_n(cfg, 3, 5, "sl-invariance");
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::sl_invariance_margin(i, cfg); },
        factored);
  }
  if (name == "gl-covariance") {
    detail::require_n(cfg, 2, 6, "gl-covariance");
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::gl_covariance_margin(i, cfg); },
        factored);
  }
  if (name == "steiner")
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::steiner_suite_margin(i, cfg); },
        haar3);
  if (name == "triangle")
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::triangle_suite_margin(i, cfg); },
        haar3);
  if (name == "eigenvalue-loop")
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::eigenvalue_loop_margin(i, cfg); },
        haar3);
  if (name == "kchain") {
    if (cfg.n != 3 && cfg.n != 5) throw std::domain_error("kchain: party count must be 3 or 5");
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::kchain_margin(i, cfg); }, haarn);
  }
  if (name == "strong-monogamy") {
    detail::require_n(cfg, 2, 6, "strong-monogamy");
    return detail::run_margin_suite(
        name, cfg, tol, [&](std::uint64_t i) { return detail::strong_monogamy_margin(i, cfg); },
        [&](std::uint64_t i) {
          return detail::params_input_json(detail::random_ghz_params(cfg.n, cfg.seed, i));
        });
  }
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace tangles

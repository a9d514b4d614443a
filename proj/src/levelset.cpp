#include "s2lab/levelset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "s2lab/errors.hpp"
#include "s2lab/symfunc.hpp"

namespace s2lab {

namespace {

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGaussNodes{-0.86113631159405257522, -0.33998104358485626480,
                                            0.33998104358485626480, 0.86113631159405257522};
constexpr std::array<double, 4> kGaussWeights{0.34785484513745385737, 0.65214515486254614263,
                                              0.65214515486254614263, 0.34785484513745385737};

template <class F>
double gauss_cell(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t k = 0; k < kGaussNodes.size(); ++k) s += kGaussWeights[k] * f(mid + half * kGaussNodes[k]);
  return half * s;
}

std::size_t cell_of(std::span<const double> grid, double t) {
  auto it = std::upper_bound(grid.begin(), grid.end(), t);
  std::size_t i = it == grid.begin() ? 0 : static_cast<std::size_t>(it - grid.begin()) - 1;
  return std::min(i, grid.size() - 2);
}

// One Richardson step on central differences with steps d and d / 2.
template <class F>
double richardson_derivative(F&& f, double x, double d) {
  const double coarse = (f(x + d) - f(x - d)) / (2.0 * d);
  const double fine = (f(x + 0.5 * d) - f(x - 0.5 * d)) / d;
  return (4.0 * fine - coarse) / 3.0;
}

// Differencing step in t_u. Where u is flat in cylinder time (w small, a
// smooth end) a fixed step in t_u would jump across the whole profile, so it
// is scaled to move t by about diff_step.
double local_step(const LevelSetOptions& opt, double w) { return opt.diff_step * std::min(1.0, w); }

// Summaries at t_u +- d and t_u +- d / 2, shared by several derivatives.
struct Stencil {
  LevelSetSummary plus, minus, half_plus, half_minus;
  double d;

  double derivative(double LevelSetSummary::*field) const {
    const double coarse = (plus.*field - minus.*field) / (2.0 * d);
    const double fine = (half_plus.*field - half_minus.*field) / d;
    return (4.0 * fine - coarse) / 3.0;
  }
};

double a_prime(const LevelSetEvaluator& ev, double t_u, double d) {
  const double coarse = ev.a_increment(t_u - d, t_u + d) / (2.0 * d);
  const double fine = ev.a_increment(t_u - 0.5 * d, t_u + 0.5 * d) / d;
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace

double d_limit_plus(double beta) {
  const double b = std::abs(beta);
  return 1.5 * b * b - 0.5 * b * b * b;
}

double d_limit_minus(double beta) {
  const double a = 2.0 + beta;
  return 1.5 * a * a - 0.5 * a * a * a;
}

LevelSetEvaluator::LevelSetEvaluator(const RadialProfile& p) : profile_(p) {
  const auto grid = profile_.grid();
  const auto h = profile_.h();
  const auto dh = profile_.dh();
  const std::size_t cells = grid.size() - 1;
  cell_integral_.resize(cells);
  cumulative_.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    cell_integral_[i] = partial_cell(i, grid[i], grid[i + 1]);
    cumulative_[i + 1] = cumulative_[i] + cell_integral_[i];
  }
  if (dh.front() > 0.0) left_tail_ = std::exp(4.0 * h.front()) / (4.0 * dh.front());
  if (dh.back() < 0.0) right_tail_ = std::exp(4.0 * h.back()) / (-4.0 * dh.back());
  u_max_ = h.front() - grid.front();
  u_min_ = h.back() - grid.back();
}

double LevelSetEvaluator::partial_cell(std::size_t /*cell*/, double t0, double t1) const {
  return gauss_cell([this](double t) { return std::exp(4.0 * profile_.state_at(t).h); }, t0, t1);
}

double LevelSetEvaluator::weight_integral(double t0, double t1) const {
  if (!(t0 <= t1)) throw DomainError("weight_integral: t0 must not exceed t1");
  const auto grid = profile_.grid();
  if (t0 < grid.front() || t1 > grid.back()) throw DomainError("weight_integral: interval outside the profile");
  const std::size_t i0 = cell_of(grid, t0);
  const std::size_t i1 = cell_of(grid, t1);
  if (i0 == i1) return partial_cell(i0, t0, t1);
  double s = partial_cell(i0, t0, grid[i0 + 1]);
  s += cumulative_[i1] - cumulative_[i0 + 1];
  s += partial_cell(i1, grid[i1], t1);
  return s;
}

double LevelSetEvaluator::cylinder_time(double t_u) const {
  if (!(t_u >= u_min_ && t_u <= u_max_))
    throw DomainError("cylinder_time: level outside the range of u over the profile");
  const auto grid = profile_.grid();
  const auto h = profile_.h();
  // u at the nodes is decreasing; find the cell with u_i >= t_u >= u_{i+1}.
  std::size_t lo = 0, hi = grid.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (h[mid] - grid[mid] >= t_u)
      lo = mid;
    else
      hi = mid;
  }
  double a = grid[lo], b = grid[hi];
  for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(a));
       ++it) {
    const double m = 0.5 * (a + b);
    if (profile_.u_at(m) >= t_u)
      a = m;
    else
      b = m;
  }
  return 0.5 * (a + b);
}

LevelSetSummary LevelSetEvaluator::summary_at(double t_u) const {
  const double t = cylinder_time(t_u);
  const auto st = profile_.state_at(t);
  const double w = 1.0 - st.dh;
  const auto grid = profile_.grid();
  const std::size_t i = cell_of(grid, t);

  LevelSetSummary s;
  s.t_u = t_u;
  s.cylinder_time = t;
  s.A = left_tail_ + cumulative_[i] + partial_cell(i, grid[i], t);
  s.B = 0.25 * std::exp(4.0 * t);
  s.C = 0.25 * std::exp(4.0 * (t_u + t));
  s.sigma0 = w * w * w;
  s.sigma1 = 6.0 * w * w - 3.0 * w * w * w;
  s.D = 0.25 * (s.sigma0 + s.sigma1);
  s.z = -std::cbrt(s.sigma0);
  s.M = (2.0 / 3.0) * s.D + (4.0 / 9.0) * s.D * s.z + s.z * s.z * s.z * s.z / 36.0 - s.C;
  return s;
}

double LevelSetEvaluator::a_increment(double t_u_lo, double t_u_hi) const {
  if (!(t_u_lo <= t_u_hi)) throw DomainError("a_increment: levels out of order");
  // Larger level, smaller region: A(hi) - A(lo) = -int_{t(hi)}^{t(lo)} e^{4h}.
  return -weight_integral(cylinder_time(t_u_hi), cylinder_time(t_u_lo));
}

LevelSetSummary summary_at(const RadialProfile& p, double t_u) { return LevelSetEvaluator(p).summary_at(t_u); }

namespace {

// First and last node where e^{4h} exceeds the floor.
std::pair<std::size_t, std::size_t> weight_band(const RadialProfile& p, double floor) {
  const auto h = p.h();
  const double log_floor = std::log(floor);
  std::size_t first = h.size(), last = 0;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (4.0 * h[i] > log_floor) {
      first = std::min(first, i);
      last = i;
    }
  if (first >= last) throw DomainError("profile has no usable band where e^{4h} is above the floor");
  return {first, last};
}

}  // namespace

std::vector<double> default_level_grid(const RadialProfile& p, std::size_t n, const LevelSetOptions& options) {
  if (n < 10) throw DomainError("default_level_grid: at least 10 points required");
  const auto [first, last] = weight_band(p, 1e-14);
  const auto grid = p.grid();
  const auto h = p.h();
  const auto dh = p.dh();
  // Keep every differencing stencil inside the band.
  auto pull = [&](std::size_t i) { return 2.0 * local_step(options, 1.0 - dh[i]); };
  const double lo = h[last] - grid[last] + pull(last);
  const double hi = h[first] - grid[first] - pull(first);
  if (!(hi > lo)) throw DomainError("default_level_grid: band too narrow");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  out.back() = hi;
  return out;
}

std::vector<double> interior_levels(const RadialProfile& p, std::size_t count, double min_weight) {
  if (count == 0) return {};
  const auto h = p.h();
  const double peak = *std::max_element(h.begin(), h.end());
  const auto [first, last] = weight_band(p, min_weight * std::exp(4.0 * peak));
  const auto grid = p.grid();
  const double a = grid[first], b = grid[last];
  std::vector<double> out;
  out.reserve(count);
  // Uniform in cylinder time, listed by increasing t_u.
  for (std::size_t k = count; k >= 1; --k) {
    const double t = a + (b - a) * static_cast<double>(k) / static_cast<double>(count + 1);
    out.push_back(p.u_at(t));
  }
  return out;
}

std::vector<LevelSetSummary> summaries(const LevelSetEvaluator& ev, std::span<const double> grid) {
  std::vector<LevelSetSummary> rows;
  rows.reserve(grid.size());
  for (double t_u : grid) rows.push_back(ev.summary_at(t_u));
  return rows;
}

RelationReport relation_report(const RadialProfile& p, std::span<const double> grid, const LevelSetOptions& options) {
  return relation_report(LevelSetEvaluator(p), grid, options);
}

RelationReport relation_report(const LevelSetEvaluator& ev, std::span<const double> grid,
                               const LevelSetOptions& options) {
  if (grid.size() < 10) throw DomainError("relation_report: at least 10 grid points required");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("relation_report: grid must be strictly increasing");
  if (!(options.interior_fraction > 0.0 && options.interior_fraction <= 1.0))
    throw DomainError("relation_report: interior_fraction must lie in (0, 1]");

  const double beta = ev.profile().beta();
  const double d_plus = d_limit_plus(beta);
  const auto rows = summaries(ev, grid);

  RelationReport rep;
  rep.points = grid.size();
  double m_lo = std::numeric_limits<double>::infinity();
  double m_hi = -m_lo;
  double m_sum = 0.0;
  for (const auto& s : rows) {
    m_lo = std::min(m_lo, s.M);
    m_hi = std::max(m_hi, s.M);
    m_sum += s.M;
  }
  rep.M_spread = m_hi - m_lo;
  rep.M_mean = m_sum / static_cast<double>(rows.size());

  const auto skip = static_cast<std::size_t>(
      std::floor(0.5 * (1.0 - options.interior_fraction) * static_cast<double>(grid.size())));
  rep.min_M_slope = std::numeric_limits<double>::infinity();
  for (std::size_t i = skip; i + skip < grid.size(); ++i) {
    const auto& s = rows[i];
    const double t_u = s.t_u;
    const double d = local_step(options, -s.z);
    const double ap = a_prime(ev, t_u, d);
    const Stencil st{ev.summary_at(t_u + d), ev.summary_at(t_u - d), ev.summary_at(t_u + 0.5 * d),
                     ev.summary_at(t_u - 0.5 * d), d};
    const double cp = st.derivative(&LevelSetSummary::C);
    const double dp = st.derivative(&LevelSetSummary::D);
    const double mp = st.derivative(&LevelSetSummary::M);
    rep.max_abs_CA = std::max(rep.max_abs_CA, std::abs(cp - ap - 4.0 * s.C));
    rep.max_abs_AD = std::max(rep.max_abs_AD, std::abs(s.A - (2.0 / 3.0) * (s.D - d_plus)));
    rep.max_abs_AD_slope = std::max(rep.max_abs_AD_slope, std::abs(ap - (2.0 / 3.0) * dp));
    rep.min_M_slope = std::min(rep.min_M_slope, mp);
    ++rep.interior_points;
  }
  if (rep.interior_points == 0) rep.min_M_slope = 0.0;

  const auto& first = rows.front();
  const auto& last = rows.back();
  rep.limits.z_plus = std::abs(last.z - beta);
  rep.limits.z_minus = std::abs(first.z + 2.0 + beta);
  rep.limits.d_plus = std::abs(last.D - d_plus);
  rep.limits.d_minus = std::abs(first.D - d_limit_minus(beta));
  rep.limits.c_plus = last.C;
  rep.limits.c_minus = first.C;
  return rep;
}

double key_inequality_ratio(const RadialProfile& p, double t_u, const LevelSetOptions& options) {
  return key_inequality_ratio(LevelSetEvaluator(p), reconstruct_factor(p), t_u, options);
}

double key_inequality_ratio(const LevelSetEvaluator& ev, const ConformalFactor& u, double t_u,
                            const LevelSetOptions& options) {
  const auto s = ev.summary_at(t_u);
  const double d = local_step(options, -s.z);
  const double zp = richardson_derivative([&](double x) { return ev.summary_at(x).z; }, t_u, d);
  const double ap = a_prime(ev, t_u, d);

  // The level set is the round sphere |x| = r; average a point value over it.
  const double r = std::exp(s.cylinder_time);
  const Point4 x{r, 0.0, 0.0, 0.0};
  const SymmetricMatrix a = schouten_flat(u, x);
  const Point4 g = u.gradient_at(x);
  const double gn = norm(g);
  double ann = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      ann += g[static_cast<std::size_t>(i)] * a(i, j) * g[static_cast<std::size_t>(j)];
  ann /= gn * gn;
  const double sigma1_tangential = a.trace() - ann;
  const double avg = sigma1_tangential * gn * r * r * r;

  const double za = s.z * ap;
  const double lhs = zp * avg * za * za;
  const double c4 = 4.0 * s.C;
  const double rhs = 1.5 * c4 * c4 * c4;
  if (!(rhs > 0.0)) throw DomainError("key_inequality_ratio: right-hand side underflows at this level");
  return lhs / rhs;
}

double gbc_from_profile(const RadialProfile& p) {
  const LevelSetEvaluator ev(p);
  const auto u = reconstruct_factor(p);
  const auto grid = p.grid();
  auto integrand = [&](double t) {
    const double r = std::exp(t);
    const double sigma2 = sigma_k_curvature(u, Point4{r, 0.0, 0.0, 0.0}, 2);
    return sigma2 * std::exp(4.0 * p.state_at(t).h);
  };
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) s += gauss_cell(integrand, grid[i], grid[i + 1]);
  // Beyond the grid sigma_2 keeps its constant value.
  const double sigma2_left = sigma_k_curvature(u, Point4{std::exp(grid.front()), 0.0, 0.0, 0.0}, 2);
  const double sigma2_right = sigma_k_curvature(u, Point4{std::exp(grid.back()), 0.0, 0.0, 0.0}, 2);
  return s + sigma2_left * ev.left_tail() + sigma2_right * ev.right_tail();
}

namespace {

constexpr std::size_t kChunk = 4096;

struct ChunkSums {
  double a = 0.0;
  double a2 = 0.0;
  std::size_t inside = 0;
};

ChunkSums sample_chunk(const ConformalFactor& u, double t_u, std::uint64_t seed, std::size_t chunk,
                       std::size_t count, double half_width) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 rng(seq);
  ChunkSums s;
  for (std::size_t k = 0; k < count; ++k) {
    Point4 x;
    for (auto& c : x) c = half_width * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
    const double v = u.value_at(x);
    if (v >= t_u) {
      const double e = std::exp(4.0 * v);
      s.a += e;
      s.a2 += e * e;
      ++s.inside;
    }
  }
  return s;
}

void check_containment(const ConformalFactor& u, double t_u, double half_width) {
  constexpr int kSide = 9;
  for (int axis = 0; axis < 4; ++axis)
    for (double sign : {-1.0, 1.0})
      for (int a = 0; a < kSide; ++a)
        for (int b = 0; b < kSide; ++b)
          for (int c = 0; c < kSide; ++c) {
            const int idx[3] = {a, b, c};
            Point4 x;
            int k = 0;
            for (int d = 0; d < 4; ++d) {
              if (d == axis) {
                x[static_cast<std::size_t>(d)] = sign * half_width;
              } else {
                x[static_cast<std::size_t>(d)] = half_width * (2.0 * idx[k] / (kSide - 1) - 1.0);
                ++k;
              }
            }
            if (u.value_at(x) >= t_u)
              throw DomainError("montecarlo_volume_check: superlevel set reaches the sampling box boundary");
          }
}

}  // namespace

MonteCarloEstimate montecarlo_volume_check(const ConformalFactor& u, double t_u, std::uint64_t seed,
                                           std::size_t n_samples, double half_width) {
  if (n_samples < 10000) throw DomainError("montecarlo_volume_check: at least 1e4 samples required");
  if (!(half_width > 0.0)) throw DomainError("montecarlo_volume_check: half_width must be positive");
  check_containment(u, t_u, half_width);

  const std::size_t chunks = (n_samples + kChunk - 1) / kChunk;
  std::vector<ChunkSums> sums(chunks);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t c = first; c < chunks; c += stride) {
      const std::size_t count = std::min(kChunk, n_samples - c * kChunk);
      sums[c] = sample_chunk(u, t_u, seed, c, count, half_width);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), chunks));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  double a = 0.0, a2 = 0.0;
  std::size_t inside = 0;
  for (const auto& s : sums) {
    a += s.a;
    a2 += s.a2;
    inside += s.inside;
  }
  const double n = static_cast<double>(n_samples);
  const double box = std::pow(2.0 * half_width, 4);
  const double scale = box / sphere_volume(3);

  MonteCarloEstimate est;
  est.samples = n_samples;
  est.inside = inside;
  const double pb = static_cast<double>(inside) / n;
  const double ma = a / n;
  est.b_est = scale * pb;
  est.a_est = scale * ma;
  est.b_stderr = scale * std::sqrt(std::max(0.0, pb * (1.0 - pb)) / (n - 1.0));
  est.a_stderr = scale * std::sqrt(std::max(0.0, a2 / n - ma * ma) / (n - 1.0));
  return est;
}

}  // namespace s2lab

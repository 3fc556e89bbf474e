#include "dgwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace dgwave {
namespace {

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double acc = 0.0;
  for (size_t i = 1; i < t.size(); ++i)
    acc += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  return acc;
}

std::mt19937_64 seeded_rng(std::uint64_t seed, double h_index) {
  std::seed_seq seq{seed, static_cast<std::uint64_t>(h_index)};
  return std::mt19937_64(seq);
}

int next_pow2(double x) {
  int n = 4;
  while (n < x) n *= 2;
  return n;
}

}  // namespace

double observability_quotient(const EvolutionResult& result) {
  if (result.times.empty())
    throw std::invalid_argument("observability_quotient: empty trace");
  const double e0 = result.energy.front();
  const double integral = trapezoid(result.times, result.local_energy);
  if (integral < 1e-300) return std::numeric_limits<double>::infinity();
  return e0 / integral;
}

GridSpec experiment_grid(const ObsExperimentSpec& spec, double h) {
  const double gamma = (spec.gamma > 0.0) ? spec.gamma : default_gamma(h);
  const double v_ph = max_group_speed(h, spec.s, Branch::Physical);
  const double v_sp = max_group_speed(h, spec.s, Branch::Spurious);
  const double v_max = std::max(v_ph, v_sp);
  const double half_width =
      (spec.data == DataKind::Packet) ? 6.0 / gamma : 1.0;
  const double L_min = 1.0 + v_max * spec.T + half_width;
  const int N = next_pow2(2.0 * L_min / h);
  GridSpec grid = GridSpec::from_spacing(h, N);
  require_no_wrap(grid, spec.T, v_max, half_width);
  return grid;
}

std::pair<ZState, ZState> build_initial_data(const ObsExperimentSpec& spec,
                                             const GridSpec& grid,
                                             double h_index) {
  const double h = grid.h;
  switch (spec.data) {
    case DataKind::Packet: {
      WavePacketSpec packet;
      packet.x_star = spec.x_star;
      packet.xi0 = spec.xi0_frac * kPi / h;
      packet.gamma = (spec.gamma > 0.0) ? spec.gamma : default_gamma(h);
      packet.branch = spec.branch;
      auto [u0, u1] = make_wavepacket(packet, grid, spec.s);
      if (spec.filter == FilterKind::Fourier) {
        u0 = fourier_filter(u0, grid, spec.delta);
        u1 = fourier_filter(u1, grid, spec.delta);
      }
      return {std::move(u0), std::move(u1)};
    }
    case DataKind::RandomPhysical: {
      auto rng = seeded_rng(spec.seed, h_index);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      DGState r0 = DGState::zeros(grid.N), r1 = DGState::zeros(grid.N);
      for (int j = 0; j < grid.N; ++j) {
        r0.A[j] = dist(rng);
        r0.J[j] = dist(rng);
        r1.A[j] = dist(rng);
        r1.J[j] = dist(rng);
      }
      Spectrum s0 = sdft_forward(r0, grid);
      Spectrum s1 = sdft_forward(r1, grid);
      mode_project(s0, s1, grid, spec.s, spec.branch);
      if (spec.filter == FilterKind::Fourier) {
        const double cutoff = kPi * spec.delta / h;
        for (int i = 0; i < grid.N; ++i) {
          if (std::abs(grid.xi(i)) > cutoff) {
            s0.Ahat[i] = s0.Jhat[i] = 0.0;
            s1.Ahat[i] = s1.Jhat[i] = 0.0;
          }
        }
      }
      return {sdft_inverse(s0, grid), sdft_inverse(s1, grid)};
    }
    case DataKind::BigridRandom: {
      auto rng = seeded_rng(spec.seed, h_index);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      std::vector<double> odd(grid.N / 2);
      for (auto& v : odd) v = dist(rng);
      const DGState u0 = bigrid_data(odd, grid);
      return {ZState::from_real(u0), ZState::zeros(grid.N)};
    }
  }
  throw std::invalid_argument("build_initial_data: unknown data kind");
}

ObsReport run_observability(const ObsExperimentSpec& spec) {
  if (spec.h_list.empty())
    throw std::invalid_argument("run_observability: empty h list");
  for (size_t i = 1; i < spec.h_list.size(); ++i)
    if (!(spec.h_list[i] < spec.h_list[i - 1]))
      throw std::invalid_argument("run_observability: h list must decrease");
  if (!(spec.T > 0.0))
    throw std::invalid_argument("run_observability: T must be positive");

  ObsReport report;
  report.rows.resize(spec.h_list.size());
  auto run_one = [&](size_t i) {
    const double h = spec.h_list[i];
    const GridSpec grid = experiment_grid(spec, h);
    auto [u0, u1] = build_initial_data(spec, grid, static_cast<double>(i));
    const ObservationRegion region =
        ObservationRegion::outside_unit_interval(grid);

    std::vector<double> sample_times(spec.n_samples + 1);
    for (int k = 0; k <= spec.n_samples; ++k)
      sample_times[k] = spec.T * k / spec.n_samples;

    EvolutionResult result;
    if (spec.engine == EngineKind::Spectral) {
      result = evolve_spectral(u0, u1, grid, spec.s, sample_times, &region);
    } else {
      LeapfrogParams lp;
      lp.T = spec.T;
      lp.safety = spec.dt_safety;
      lp.n_samples = spec.n_samples;
      result = leapfrog(u0, u1, grid, spec.s, lp, &region);
    }

    ObsRow row;
    row.h = h;
    row.e_total = result.energy.front();
    row.int_e_omega = trapezoid(result.times, result.local_energy);
    row.quotient = observability_quotient(result);
    report.rows[i] = row;
  };

  // rows are independent and individually seeded, so the result does not
  // depend on the degree of parallelism
  const size_t n_rows = spec.h_list.size();
  const size_t workers =
      std::min<size_t>(std::max(1, spec.jobs), n_rows);
  if (workers <= 1) {
    for (size_t i = 0; i < n_rows; ++i) run_one(i);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < n_rows; i = next.fetch_add(1)) {
          try {
            run_one(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  // Fit log C_h = slope * log(1/h) + const.
  const size_t n = report.rows.size();
  bool finite = true;
  for (const auto& r : report.rows)
    finite = finite && std::isfinite(r.quotient) && r.quotient > 0.0;
  if (n >= 2 && finite) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : report.rows) {
      const double x = std::log(1.0 / r.h);
      const double y = std::log(r.quotient);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    report.slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - report.slope * sx) / n;
    double rss = 0.0;
    for (const auto& r : report.rows) {
      const double pred = report.slope * std::log(1.0 / r.h) + intercept;
      const double d = std::log(r.quotient) - pred;
      rss += d * d;
    }
    report.residual = std::sqrt(rss / n);
  } else if (!finite) {
    report.note = "non-finite quotient in sweep; slope not fitted";
  }

  report.monotone = true;
  report.doubling = true;
  double cmin = report.rows.front().quotient, cmax = cmin;
  for (size_t i = 1; i < n; ++i) {
    const double prev = report.rows[i - 1].quotient;
    const double cur = report.rows[i].quotient;
    if (!(cur > prev)) report.monotone = false;
    if (!(cur >= 2.0 * prev)) report.doubling = false;
    cmin = std::min(cmin, cur);
    cmax = std::max(cmax, cur);
  }
  report.max_min_ratio = (cmin > 0.0) ? cmax / cmin
                                      : std::numeric_limits<double>::infinity();
  return report;
}

double uniform_time_bound(double s, double delta, double h) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("uniform_time_bound: delta must be in (0,1)");
  const int samples = 2048;
  const double xi_max = kPi * delta / h;
  double vmin = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= samples; ++k)
    vmin = std::min(vmin, group_velocity(xi_max * k / samples, h, s,
                                         Branch::Physical));
  if (!(vmin > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 / vmin;
}

ObsReport blowup_experiment(const ObsExperimentSpec& spec) {
  if (spec.data != DataKind::Packet)
    throw std::invalid_argument("blowup_experiment: packet data required");
  return run_observability(spec);
}

ObsReport uniformity_experiment(const ObsExperimentSpec& spec) {
  if (spec.filter == FilterKind::None && spec.data != DataKind::BigridRandom)
    throw std::invalid_argument(
        "uniformity_experiment: filtered or bi-grid data required");
  // the bi-grid rule damps the upper half band, so delta = 1/2 is the
  // effective band fraction when no Fourier filter is configured
  const double delta =
      (spec.filter == FilterKind::Fourier) ? spec.delta : 0.5;
  const double h_min = spec.h_list.empty() ? 0.0 : spec.h_list.back();
  if (h_min > 0.0 && spec.T < uniform_time_bound(spec.s, delta, h_min))
    throw std::invalid_argument(
        "uniformity_experiment: T below the travel-time bound for the kept "
        "band");
  return run_observability(spec);
}

}  // namespace dgwave

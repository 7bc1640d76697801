#include "hyperchip/counts.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace hyperchip {

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  // splitmix64 over a mix of both inputs.
  std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::mt19937_64 derived_rng(std::uint64_t master_seed, std::uint64_t index) {
  return std::mt19937_64(derive_seed(master_seed, index));
}

std::int64_t sample_poisson(Real mean, std::mt19937_64& rng) {
  if (!(mean > 0.0)) return 0;
  if (mean > 1e12) return std::llround(mean);
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        try {
          for (std::size_t i = next++; i < n; i = next++) body(i);
        } catch (...) {
          // first failure wins; the other workers drain the queue
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

ExperimentRecord make_record(const MeasurementSetting& setting, Real probability, Real shots,
                             const SourceConfig& cfg, std::vector<InputPair> inputs) {
  if (!(shots > 0.0)) throw PhysicsError("shots must be positive");
  ExperimentRecord rec;
  rec.setting = setting;
  rec.shots = shots;
  rec.duration_s = shots / cfg.pair_rate_hz;
  rec.probability = std::clamp(probability, 0.0, 1.0);
  rec.expected_accidentals = cfg.accidental_rate_hz * rec.duration_s;
  rec.inputs = std::move(inputs);
  rec.normalized = rec.probability;
  return rec;
}

ExperimentRecord apply_efficiencies(ExperimentRecord record, const EfficiencyTable& table) {
  if (record.inputs.empty()) throw PhysicsError("record lists no input modes for efficiencies");
  Real weighted = 0.0;
  Real total = 0.0;
  Real lo = 1.0;
  Real hi = 0.0;
  for (const auto& in : record.inputs) {
    const Real product = efficiency(table, in.first.arm, in.first.mode) *
                         efficiency(table, in.second.arm, in.second.mode);
    weighted += in.population * product;
    total += in.population;
    lo = std::min(lo, product);
    hi = std::max(hi, product);
  }
  if (!(total > 0.0)) throw PhysicsError("input populations sum to zero");
  record.rate_factor *= weighted / total;
  record.path_asymmetric = record.path_asymmetric || (hi - lo) > 1e-12;
  return record;
}

void sample_counts(ExperimentRecord& record, std::mt19937_64* rng) {
  const Real signal_mean = record.expected_signal();
  const Real acc_mean = record.expected_accidentals;
  record.accidentals = std::llround(acc_mean);
  if (rng == nullptr) {
    record.raw_counts = std::llround(signal_mean + acc_mean);
    record.normalized = record.probability;
    return;
  }
  record.raw_counts = sample_poisson(signal_mean, *rng) + sample_poisson(acc_mean, *rng);
  const Real denom = record.shots * record.rate_factor;
  const Real est = denom > 0.0 ? (static_cast<Real>(record.raw_counts) - acc_mean) / denom : 0.0;
  record.normalized = std::clamp(est, 0.0, 1.0);
}

}  // namespace hyperchip

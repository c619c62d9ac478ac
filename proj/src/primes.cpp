#include "sigclo/primes.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>

namespace sigclo {

namespace {
constexpr uint64_t kInitialLimit = 1u << 18;  // covers the first ~23000 primes
constexpr uint64_t kHardLimit = 200'000'000;  // sieve memory guard
}  // namespace

PrimeTable::PrimeTable() {
  extend_to_limit(kInitialLimit);
}

PrimeTable& PrimeTable::instance() {
  static PrimeTable table;
  return table;
}

void PrimeTable::extend_to_limit(uint64_t new_limit) {
  if (new_limit <= limit_) return;
  if (new_limit > kHardLimit) throw std::length_error("prime table limit exceeds supported range");

  if (limit_ == 0) {
    // initial plain sieve
    std::vector<uint8_t> composite(new_limit + 1, 0);
    for (uint64_t i = 2; i * i <= new_limit; ++i) {
      if (!composite[i]) {
        for (uint64_t m = i * i; m <= new_limit; m += i) composite[m] = 1;
      }
    }
    for (uint64_t i = 2; i <= new_limit; ++i) {
      if (!composite[i]) primes_.push_back(i);
    }
    limit_ = new_limit;
    return;
  }

  // segmented extension; base primes up to sqrt(new_limit) are already present
  // because limit_ >= sqrt(2 * limit_) for limit_ >= 2.
  uint64_t lo = limit_ + 1;
  std::vector<uint8_t> composite(new_limit - lo + 1, 0);
  for (uint64_t p : primes_) {
    if (p * p > new_limit) break;
    uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (uint64_t m = start; m <= new_limit; m += p) composite[m - lo] = 1;
  }
  for (uint64_t i = lo; i <= new_limit; ++i) {
    if (!composite[i - lo]) primes_.push_back(i);
  }
  limit_ = new_limit;
}

void PrimeTable::ensure_count(uint64_t count) {
  while (primes_.size() < count) extend_to_limit(limit_ * 2);
}

void PrimeTable::ensure_limit(uint64_t limit) {
  uint64_t target = limit_;
  while (target < limit) target *= 2;
  extend_to_limit(target);
}

uint64_t PrimeTable::nth_prime(uint64_t j) {
  if (j == 0) throw std::invalid_argument("prime indices are 1-based");
  std::lock_guard<std::mutex> lock(mu_);
  ensure_count(j);
  return primes_[j - 1];
}

std::vector<uint64_t> PrimeTable::primes_up_to(uint64_t x) {
  if (x < 2) throw std::invalid_argument("primes_up_to requires x >= 2");
  std::lock_guard<std::mutex> lock(mu_);
  ensure_limit(x);
  auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
  return std::vector<uint64_t>(primes_.begin(), end);
}

uint64_t PrimeTable::first_index_at_least(uint64_t x) {
  std::lock_guard<std::mutex> lock(mu_);
  ensure_limit(std::max<uint64_t>(x, 2));
  auto it = std::lower_bound(primes_.begin(), primes_.end(), x);
  if (it == primes_.end()) throw std::logic_error("prime table extension failed");
  return static_cast<uint64_t>(it - primes_.begin()) + 1;
}

uint64_t nth_prime(uint64_t j) { return PrimeTable::instance().nth_prime(j); }

std::vector<uint64_t> primes_up_to(uint64_t x) { return PrimeTable::instance().primes_up_to(x); }

uint64_t first_index_at_least(uint64_t x) {
  return PrimeTable::instance().first_index_at_least(x);
}

}  // namespace sigclo

#pragma once

#include <cstdint>
#include <mutex>
#include <vector>

namespace sigclo {

// Auto-extending table of primes backed by a segmented sieve of Eratosthenes.
// 1-indexed: nth_prime(1) == 2. Already-returned values never change when the
// table grows, and every public call is internally synchronized, so readers
// never observe a partially built table.
class PrimeTable {
public:
  static PrimeTable& instance();

  uint64_t nth_prime(uint64_t j);

  // All primes <= x, increasing. Requires x >= 2.
  std::vector<uint64_t> primes_up_to(uint64_t x);

  // Index j of the first prime with p_j >= x.
  uint64_t first_index_at_least(uint64_t x);

private:
  PrimeTable();

  void extend_to_limit(uint64_t new_limit);  // caller holds mu_
  void ensure_count(uint64_t count);         // caller holds mu_
  void ensure_limit(uint64_t limit);         // caller holds mu_

  std::mutex mu_;
  uint64_t limit_ = 0;
  std::vector<uint64_t> primes_;
};

uint64_t nth_prime(uint64_t j);
std::vector<uint64_t> primes_up_to(uint64_t x);
uint64_t first_index_at_least(uint64_t x);

}  // namespace sigclo

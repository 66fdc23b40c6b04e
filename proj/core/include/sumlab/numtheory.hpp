#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace sumlab::nt {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exponent, std::uint64_t m);

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<std::uint64_t> invmod(std::uint64_t a, std::uint64_t m);

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Distinct prime factors, ascending, by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Divisors of n, ascending.
std::vector<std::uint64_t> divisors(std::uint64_t n);

/// Smallest primitive root of the prime p.
std::uint64_t primitive_root(std::uint64_t p);

/// Primes in [lo, hi], ascending (segmented sieve for small ranges).
std::vector<std::uint64_t> primes_in(std::uint64_t lo, std::uint64_t hi);

}  // namespace sumlab::nt

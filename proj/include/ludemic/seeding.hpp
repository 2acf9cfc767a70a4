#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ludemic {

using Rng = std::mt19937_64;

/// 64-bit FNV-1a; stable across platforms, used to fold names into seeds.
std::uint64_t fnv1a(std::string_view text);

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent stream seed from a parent seed and a path of
/// coordinates, e.g. (master, game, focus, combination, repetition).
std::uint64_t derive_seed(std::uint64_t parent, std::initializer_list<std::uint64_t> path);

/// Uniform integer in [0, bound). Unlike std::uniform_int_distribution the
/// result is identical on every standard library.
std::uint64_t uniform_index(Rng& rng, std::uint64_t bound);

/// Uniform real in [0, 1) from the top 53 bits.
double uniform_unit(Rng& rng);

/// Standard normal via Box-Muller on uniform_unit.
double standard_normal(Rng& rng);

int default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
/// must write only to their own slots; the first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace ludemic

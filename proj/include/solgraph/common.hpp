#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace solgraph {

// Error taxonomy. Everything numerical that can fail throws one of these;
// callers that want a soft failure catch Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid argument / violated precondition.
struct ArgumentError : Error {
  using Error::Error;
};

// Root bracket has no sign change.
struct BracketError : Error {
  using Error::Error;
};

// Iteration budget exhausted before reaching the requested tolerance.
struct ConvergenceError : Error {
  double achieved = 0.0;
  ConvergenceError(const std::string& msg, double achieved_err)
      : Error(msg), achieved(achieved_err) {}
};

// A construction inequality failed; the message names it.
struct ConstructionError : Error {
  using Error::Error;
};

// Input outside the regime where counts/structure are guaranteed.
struct UnsupportedConfiguration : Error {
  using Error::Error;
};

// Geometric consistency failure (boundary does not close, arcs intersect, ...).
struct GeometryError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

// Point of the upper half-plane, Euclidean coordinates.
struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline double dist(Point a, Point b) { return norm(a - b); }

inline constexpr double kPi = 3.14159265358979323846;

// splitmix64: tiny deterministic hash/stream generator for jitter and seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline double hash_unit(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a * 0x9e3779b97f4a7c15ull + b;
  std::uint64_t r = splitmix64(s);
  return static_cast<double>(r >> 11) * 0x1.0p-53;  // [0,1)
}

// FNV-1a 64-bit, used for output checksums in run manifests.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace solgraph

#pragma once

#include <array>
#include <string_view>

namespace qrouter {

// Working units: hbar = 1, energies in rad/ns, times in ns.

enum class Level : int { gs = 0, t1 = 1, t2 = 2, t3 = 3 };

// The four absorbers. Branch 2 couples to output line 2, branch 3 to line 3.
enum class Squid : int { s2a = 0, s2b = 1, s3a = 2, s3b = 3 };

inline constexpr std::array<Squid, 4> all_squids{Squid::s2a, Squid::s2b, Squid::s3a, Squid::s3b};

constexpr int index(Squid s) noexcept { return static_cast<int>(s); }
constexpr int index(Level l) noexcept { return static_cast<int>(l); }

// Output line reached by an excited absorber.
constexpr int output_line(Squid s) noexcept { return index(s) < 2 ? 2 : 3; }
constexpr bool is_a_branch(Squid s) noexcept { return index(s) % 2 == 0; }

std::string_view squid_name(Squid s) noexcept;

// Transmon state held fixed while a photon scatters. T2 is never a context.
enum class Condition : int { gs, t1, t3 };

std::string_view condition_name(Condition c) noexcept;
constexpr Level level_of(Condition c) noexcept {
  return c == Condition::gs ? Level::gs : (c == Condition::t1 ? Level::t1 : Level::t3);
}

struct Lifetimes {
  double t1 = 1000.0;
  double t3 = 1000.0;
  double a = 10.0;
  double b = 10.0;

  double squid(Squid s) const noexcept { return is_a_branch(s) ? a : b; }
};

struct RouterModel {
  std::array<double, 3> omega_t{};       // T1, T2, T3 above the ground state
  std::array<double, 4> omega_s{};       // 2a, 2b, 3a, 3b
  std::array<std::array<double, 4>, 3> j{};  // j[level - 1][squid]
  Lifetimes tau;
  double gamma_d = 0.0;

  double transmon(Level l) const noexcept { return l == Level::gs ? 0.0 : omega_t[index(l) - 1]; }
  double squid(Squid s) const noexcept { return omega_s[index(s)]; }
  double kerr(Level l, Squid s) const noexcept {
    return l == Level::gs ? 0.0 : j[index(l) - 1][index(s)];
  }

  // Throws ValidationError when a field is out of range.
  void validate() const;
};

// Requires both transmon lifetimes to exceed both absorber lifetimes by min_ratio.
void check_two_photon_regime(const RouterModel& m, double min_ratio = 10.0);

}  // namespace qrouter

#pragma once

#include <cstdint>

// Central defaults shared by the CLI and the acceptance suite. Everything is
// passed down explicitly; nothing reads these behind a caller's back.
namespace pwlab::defaults {

inline constexpr const char* version = "1";

inline constexpr double domain_min = -8.0;
inline constexpr double domain_max = 8.0;
inline constexpr int grid_n = 512;
inline constexpr int grid_n_measurement = 128;
inline constexpr int nmax = 40;
inline constexpr double tau_frac = 0.5;
inline constexpr std::uint64_t seed = 20240817;
inline constexpr int samples_correlations = 100000;
inline constexpr int samples_ghose = 10000;
inline constexpr int samples_equivariance = 10000;
inline constexpr double slit_k = 100.0;
inline constexpr double slit_a = 1.0;
inline constexpr double slit_l = 100.0;
inline constexpr double integrator_tol = 1e-9;

} // namespace pwlab::defaults

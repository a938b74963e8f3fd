// Generated by tools/oracles/gen_brinkmann_oracle.py; do not edit.
// gbar = -dt^2 + ds^2 + (1 + 0.1 sin(t+s)) (dx^2 + dy^2) at t = 0.
#pragma once
#include <cmath>

namespace brinkmann {
inline double profile(double w) { return (1.0/10.0)*sin(w) + 1; }
inline double dprofile(double w) { return (1.0/10.0)*cos(w); }
// Ric_bar = ricci_factor(t+s) l ox l with l = dt + ds (verified above).
inline double ricci_factor(double w) { return (1.0/4.0)*(40*sin(w) - cos(2*w) + 3)/pow(sin(w) + 10, 2); }
}

namespace brinkmann_p1 {
inline constexpr double s_coord = 0.7853981633974483;
inline constexpr double ricci_bar[16] = {0.06822158161406854, 0.06822158161406854, 0.0, 0.0, 0.06822158161406854, 0.06822158161406854, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double scal_bar = 0.0;
inline constexpr double z_slice[9] = {0.06822158161406854, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double w_slice[9] = {0.0, 0.0, 0.0, 0.0, -0.035355339059327376, 0.0, 0.0, 0.0, -0.035355339059327376};
inline constexpr double tr_w = -0.06604088253131131;
inline constexpr double scal_slice = 0.13426246414537985;
}
namespace brinkmann_p2 {
inline constexpr double s_coord = 2.879793265790644;
inline constexpr double ricci_bar[16] = {0.029661575389169324, 0.029661575389169324, 0.0, 0.0, 0.029661575389169324, 0.029661575389169324, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double scal_bar = 0.0;
inline constexpr double z_slice[9] = {0.029661575389169324, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
inline constexpr double w_slice[9] = {0.0, 0.0, 0.0, 0.0, 0.04829629131445341, 0.0, 0.0, 0.0, 0.04829629131445341};
inline constexpr double tr_w = 0.094155654958179;
inline constexpr double scal_slice = 0.05489050709803682;
}

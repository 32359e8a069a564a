#pragma once

// Reference values printed by tests/oracle/derive_constants.py.

namespace mfgstop::oracle {

inline constexpr double cir_theta = 11.95;
inline constexpr double cir_delta = 3.1820626977720443;
inline constexpr int cir_n = 12;
inline constexpr double cir_dx = 5.833333333333333;
inline constexpr double cir_up1 = 0.6159878131669633;

inline constexpr double jacobi_delta = 0.08922838594094903;
inline constexpr int jacobi_n = 13;
inline constexpr double jacobi_dx = 0.023076923076923075;
inline constexpr double jacobi_mean = 0.43004829792342797;

inline constexpr double gain_quarter = 0.04542252845405233;
inline constexpr double gain_one = 0.75;
inline constexpr double peak_factor = 1.1598608509499597;
inline constexpr double price_residual_6_05 = 75.0;

inline constexpr double omega_min_setting1 = 0.26572100000000004;
inline constexpr double leaf_setting2 = 0.015625;
inline constexpr double stay_once_setting1 = 0.5;

inline constexpr double conventional_f_zero_price_t4 = -6.881956734151132;
inline constexpr double renewable_g_t0 = -1292.9007563296093;

}  // namespace mfgstop::oracle

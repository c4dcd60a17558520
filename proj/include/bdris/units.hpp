#pragma once

#include <cmath>

namespace bdris {

// watts = 10^((dBm - 30)/10); 30 dBm -> 1 W, 40 dBm -> 10 W.
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

}  // namespace bdris

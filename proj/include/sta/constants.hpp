#ifndef STA_CONSTANTS_HPP_
#define STA_CONSTANTS_HPP_

namespace sta::constants {

inline constexpr double k_boltzmann = 1.380649e-23;        // J/K (exact, SI 2019)
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace sta::constants

#endif

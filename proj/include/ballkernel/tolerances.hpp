#ifndef BALLKERNEL_TOLERANCES_HPP
#define BALLKERNEL_TOLERANCES_HPP

namespace ballkernel::tol
{
/// Geometric identities (chord endpoints on the sphere and the mirror, reflection round trips).
inline constexpr double geometric = 1e-10;
/// Accepted deviation of a supposedly unit vector from norm 1.
inline constexpr double unit_norm = 1e-9;
/// Mirror normals handed to reflect_vector must be this close to unit length.
inline constexpr double reflect_unit = 1e-12;
/// Below this separation two points are treated as the same point.
inline constexpr double degenerate_pair = 1e-14;
/// "Strictly increasing" means consecutive differences above this floor.
inline constexpr double strictness_floor = 1e-12;
/// Two-sided z threshold for every Monte Carlo comparison.
inline constexpr double z_max = 4.0;
} // namespace ballkernel::tol

#endif // BALLKERNEL_TOLERANCES_HPP

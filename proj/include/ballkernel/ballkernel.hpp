#ifndef BALLKERNEL_BALLKERNEL_HPP
#define BALLKERNEL_BALLKERNEL_HPP

// Library headers without the command-line layer (cli/) and its JSON dependency.

#include "ballkernel/acceptance.hpp"
#include "ballkernel/bessel.hpp"
#include "ballkernel/campaigns.hpp"
#include "ballkernel/coupling.hpp"
#include "ballkernel/estimator.hpp"
#include "ballkernel/geometry.hpp"
#include "ballkernel/kernels.hpp"
#include "ballkernel/parallel.hpp"
#include "ballkernel/quadrature.hpp"
#include "ballkernel/rbm.hpp"
#include "ballkernel/rng.hpp"
#include "ballkernel/tolerances.hpp"
#include "ballkernel/vec.hpp"

#endif // BALLKERNEL_BALLKERNEL_HPP

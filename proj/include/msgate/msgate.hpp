// msgate.hpp — umbrella header
#pragma once

#include "msgate/bell.hpp"
#include "msgate/config.hpp"
#include "msgate/constants.hpp"
#include "msgate/driver.hpp"
#include "msgate/envelope.hpp"
#include "msgate/evolve.hpp"
#include "msgate/hamiltonian.hpp"
#include "msgate/integrator.hpp"
#include "msgate/mpm.hpp"
#include "msgate/ms_analytic.hpp"
#include "msgate/operators.hpp"
#include "msgate/params.hpp"
#include "msgate/plot.hpp"
#include "msgate/schedule.hpp"
#include "msgate/sweep.hpp"
#include "msgate/tomography.hpp"
#include "msgate/walsh.hpp"

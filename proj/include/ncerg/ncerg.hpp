#ifndef NCERG_NCERG_HPP_
#define NCERG_NCERG_HPP_

#include "ncerg/core.hpp"
#include "ncerg/algebra.hpp"
#include "ncerg/random.hpp"
#include "ncerg/report.hpp"
#include "ncerg/dsop.hpp"
#include "ncerg/weights.hpp"
#include "ncerg/averages.hpp"
#include "ncerg/maximal.hpp"
#include "ncerg/brunel.hpp"
#include "ncerg/convergence.hpp"
#include "ncerg/invariants.hpp"
#include "ncerg/io.hpp"
#include "ncerg/runner.hpp"

#endif  // NCERG_NCERG_HPP_

#ifndef SHELLS_SHELLS_HPP_
#define SHELLS_SHELLS_HPP_

#include "archive.hpp"
#include "bench_problems.hpp"
#include "candidate.hpp"
#include "csv.hpp"
#include "dominance.hpp"
#include "errors.hpp"
#include "expression.hpp"
#include "invariance.hpp"
#include "monotone.hpp"
#include "oracle.hpp"
#include "problem.hpp"
#include "relaxation.hpp"
#include "sampler.hpp"
#include "shell_conditions.hpp"

#endif  // SHELLS_SHELLS_HPP_

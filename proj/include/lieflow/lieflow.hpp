#pragma once

// Umbrella header for the core library (Eigen only).  JSON/CSV emission lives
// in <lieflow/report.hpp>, which also needs nlohmann/json.

#include <lieflow/algebra.hpp>
#include <lieflow/algebra_io.hpp>
#include <lieflow/chain.hpp>
#include <lieflow/chain_graph.hpp>
#include <lieflow/errors.hpp>
#include <lieflow/flow.hpp>
#include <lieflow/grading.hpp>
#include <lieflow/group.hpp>
#include <lieflow/harness.hpp>
#include <lieflow/jordan.hpp>
#include <lieflow/linalg.hpp>
#include <lieflow/quotient.hpp>
#include <lieflow/scenario.hpp>

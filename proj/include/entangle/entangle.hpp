#pragma once

#include "entangle/interval.hpp"
#include "entangle/lattice.hpp"
#include "entangle/point_io.hpp"
#include "entangle/chain_ldp.hpp"
#include "entangle/branch_bound.hpp"
#include "entangle/schedule.hpp"
#include "entangle/bounds.hpp"
#include "entangle/pipeline.hpp"
#include "entangle/path_oracle.hpp"
#include "entangle/perc_sim.hpp"
#include "entangle/sphere.hpp"
#include "entangle/certificate.hpp"

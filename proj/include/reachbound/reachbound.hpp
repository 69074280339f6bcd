#pragma once

#include "reachbound/beta_reach.hpp"
#include "reachbound/experiment.hpp"
#include "reachbound/geometry.hpp"
#include "reachbound/io.hpp"
#include "reachbound/mesh.hpp"
#include "reachbound/oracle.hpp"
#include "reachbound/parallel.hpp"
#include "reachbound/point_cloud.hpp"
#include "reachbound/rconv_bound.hpp"
#include "reachbound/reach_bound.hpp"
#include "reachbound/rng.hpp"
#include "reachbound/spatial_index.hpp"
#include "reachbound/svg.hpp"
#include "reachbound/synth.hpp"

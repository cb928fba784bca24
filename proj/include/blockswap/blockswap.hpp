#pragma once

#include <blockswap/cost_profile.hpp>
#include <blockswap/enumeration.hpp>
#include <blockswap/errors.hpp>
#include <blockswap/graph.hpp>
#include <blockswap/json_io.hpp>
#include <blockswap/model_house.hpp>
#include <blockswap/random.hpp>
#include <blockswap/rational.hpp>
#include <blockswap/rewrite.hpp>
#include <blockswap/search.hpp>
#include <blockswap/synth.hpp>

#pragma once

#include "revdyn/automaton.hpp"
#include "revdyn/dot.hpp"
#include "revdyn/errors.hpp"
#include "revdyn/experiments.hpp"
#include "revdyn/information.hpp"
#include "revdyn/interface.hpp"
#include "revdyn/permutation.hpp"

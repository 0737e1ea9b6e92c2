#pragma once

#include <foconv/rational.hpp>
#include <foconv/formula.hpp>
#include <foconv/graph.hpp>
#include <foconv/lattice.hpp>
#include <foconv/eval.hpp>
#include <foconv/rooting.hpp>
#include <foconv/experiments.hpp>

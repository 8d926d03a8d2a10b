#pragma once

#include "bool_matrix.hpp"
#include "bounds.hpp"
#include "circuit.hpp"
#include "constructions.hpp"
#include "error.hpp"
#include "finfield.hpp"
#include "random.hpp"
#include "rectangles.hpp"
#include "report.hpp"

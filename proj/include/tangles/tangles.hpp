#pragma once

#include "tangles/acin.hpp"
#include "tangles/constraints.hpp"
#include "tangles/eigen.hpp"
#include "tangles/epsilon.hpp"
#include "tangles/ghz_class.hpp"
#include "tangles/haar.hpp"
#include "tangles/ket.hpp"
#include "tangles/matrix.hpp"
#include "tangles/measures.hpp"
#include "tangles/roof.hpp"
#include "tangles/suites.hpp"
#include "tangles/surface.hpp"

#pragma once

#include "grusslab/cpmaps.hpp"
#include "grusslab/gruss.hpp"
#include "grusslab/io.hpp"
#include "grusslab/linalg.hpp"
#include "grusslab/norms.hpp"
#include "grusslab/orbit.hpp"
#include "grusslab/rng.hpp"
#include "grusslab/stinespring.hpp"
#include "grusslab/sweep.hpp"
#include "grusslab/types.hpp"

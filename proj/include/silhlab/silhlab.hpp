#pragma once

#include "silhlab/expectation.hpp"
#include "silhlab/experiments.hpp"
#include "silhlab/generators.hpp"
#include "silhlab/geom.hpp"
#include "silhlab/hypotheses.hpp"
#include "silhlab/mesh.hpp"
#include "silhlab/mesh_io.hpp"
#include "silhlab/rng.hpp"
#include "silhlab/silhouette.hpp"
#include "silhlab/surfaces.hpp"
#include "silhlab/svg.hpp"
#include "silhlab/util.hpp"

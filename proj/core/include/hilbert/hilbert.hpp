#pragma once

#include "hilbert/domain.hpp"
#include "hilbert/duality.hpp"
#include "hilbert/error.hpp"
#include "hilbert/groups.hpp"
#include "hilbert/horocusp.hpp"
#include "hilbert/hyperbolicity.hpp"
#include "hilbert/isometry.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/lp.hpp"
#include "hilbert/metric.hpp"
#include "hilbert/projlin.hpp"
#include "hilbert/scene.hpp"

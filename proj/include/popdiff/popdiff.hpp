#pragma once

#include "popdiff/certificate.hpp"
#include "popdiff/construction.hpp"
#include "popdiff/correlation.hpp"
#include "popdiff/errors.hpp"
#include "popdiff/f2n.hpp"
#include "popdiff/f2set_io.hpp"
#include "popdiff/rational.hpp"
#include "popdiff/rng.hpp"
#include "popdiff/subspace.hpp"
#include "popdiff/sweep.hpp"
#include "popdiff/walsh.hpp"

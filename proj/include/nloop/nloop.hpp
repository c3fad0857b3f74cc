#pragma once

#include "nloop/diagrams.hpp"
#include "nloop/errors.hpp"
#include "nloop/feynman.hpp"
#include "nloop/hbar_series.hpp"
#include "nloop/matrix.hpp"
#include "nloop/modular.hpp"
#include "nloop/multigraph.hpp"
#include "nloop/number_field.hpp"
#include "nloop/numeric.hpp"
#include "nloop/nz_datum.hpp"
#include "nloop/rational.hpp"
#include "nloop/real.hpp"
#include "nloop/version.hpp"

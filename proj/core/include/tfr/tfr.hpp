#pragma once

#include "tfr/dataset.hpp"
#include "tfr/error.hpp"
#include "tfr/experiment.hpp"
#include "tfr/lasso.hpp"
#include "tfr/matrix_io.hpp"
#include "tfr/measurement.hpp"
#include "tfr/metrics.hpp"
#include "tfr/render.hpp"
#include "tfr/siggen.hpp"
#include "tfr/tfd.hpp"
#include "tfr/types.hpp"
#include "tfr/uista.hpp"
#include "tfr/unet.hpp"

#pragma once

#include "triphase/beta_lift.hpp"
#include "triphase/core_state.hpp"
#include "triphase/diagnostics.hpp"
#include "triphase/errors.hpp"
#include "triphase/fd_oracle.hpp"
#include "triphase/interface.hpp"
#include "triphase/parallel.hpp"
#include "triphase/picard.hpp"
#include "triphase/scenario.hpp"
#include "triphase/spectral.hpp"
#include "triphase/table.hpp"
#include "triphase/variational.hpp"

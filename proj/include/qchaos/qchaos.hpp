#pragma once

#include "qchaos/baker.hpp"
#include "qchaos/diagnostics.hpp"
#include "qchaos/dynamics.hpp"
#include "qchaos/error.hpp"
#include "qchaos/hamiltonian.hpp"
#include "qchaos/rng.hpp"
#include "qchaos/series.hpp"
#include "qchaos/version.hpp"

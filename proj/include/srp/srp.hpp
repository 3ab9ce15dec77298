#pragma once

#include "srp/autocorr.hpp"
#include "srp/crossval.hpp"
#include "srp/csv.hpp"
#include "srp/cycle_enumeration.hpp"
#include "srp/dispersion.hpp"
#include "srp/error.hpp"
#include "srp/fourier.hpp"
#include "srp/h_identities.hpp"
#include "srp/h_series.hpp"
#include "srp/permutation_sampler.hpp"
#include "srp/random.hpp"
#include "srp/scans.hpp"
#include "srp/spatial.hpp"
#include "srp/thermo.hpp"
#include "srp/weights.hpp"

#pragma once

#include "saffron/bitvec.hpp"
#include "saffron/channel.hpp"
#include "saffron/density_evolution.hpp"
#include "saffron/ecc_robust.hpp"
#include "saffron/gf256.hpp"
#include "saffron/harness.hpp"
#include "saffron/peeling_decoder.hpp"
#include "saffron/pool_design.hpp"
#include "saffron/prf.hpp"
#include "saffron/reed_solomon.hpp"
#include "saffron/serialization.hpp"
#include "saffron/signature.hpp"

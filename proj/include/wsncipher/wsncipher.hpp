#pragma once

#include "wsncipher/bitstream.hpp"
#include "wsncipher/cipher.hpp"
#include "wsncipher/error.hpp"
#include "wsncipher/hex.hpp"
#include "wsncipher/keyspace.hpp"
#include "wsncipher/sim.hpp"
#include "wsncipher/sim_json.hpp"
#include "wsncipher/vectors.hpp"
#include "wsncipher/wire.hpp"

#pragma once

#include "esnd/density.hpp"
#include "esnd/enumeration.hpp"
#include "esnd/error.hpp"
#include "esnd/exact.hpp"
#include "esnd/gaps.hpp"
#include "esnd/io.hpp"
#include "esnd/parallel.hpp"
#include "esnd/primes.hpp"
#include "esnd/sequences.hpp"
#include "esnd/verify.hpp"

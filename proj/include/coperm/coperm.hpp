#pragma once

#include "coperm/bigcount.hpp"
#include "coperm/bitmatrix.hpp"
#include "coperm/bounds.hpp"
#include "coperm/bucketing.hpp"
#include "coperm/cache.hpp"
#include "coperm/counts.hpp"
#include "coperm/euler.hpp"
#include "coperm/interval.hpp"
#include "coperm/matching.hpp"
#include "coperm/permanent.hpp"
#include "coperm/primes.hpp"
#include "coperm/rng.hpp"
#include "coperm/sampler.hpp"
#include "coperm/template_weights.hpp"
#include "coperm/verify.hpp"

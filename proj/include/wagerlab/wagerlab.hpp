#pragma once

#include "wagerlab/adversary.hpp"
#include "wagerlab/bits.hpp"
#include "wagerlab/criteria.hpp"
#include "wagerlab/errors.hpp"
#include "wagerlab/evaluate.hpp"
#include "wagerlab/family.hpp"
#include "wagerlab/harmonic.hpp"
#include "wagerlab/io.hpp"
#include "wagerlab/rational.hpp"
#include "wagerlab/spec.hpp"
#include "wagerlab/strategies.hpp"
#include "wagerlab/transforms.hpp"
#include "wagerlab/version.hpp"
#include "wagerlab/wager_set.hpp"

#pragma once

#include "isoforge/checkers.hpp"
#include "isoforge/elliptic.hpp"
#include "isoforge/errors.hpp"
#include "isoforge/exactnum.hpp"
#include "isoforge/genus2.hpp"
#include "isoforge/kgroup.hpp"
#include "isoforge/pontryagin.hpp"
#include "isoforge/reduction.hpp"
#include "isoforge/scholten.hpp"

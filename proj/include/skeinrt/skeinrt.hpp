#pragma once

#include "numth.hpp"
#include "gauss.hpp"
#include "laurent.hpp"
#include "skein.hpp"
#include "tqft.hpp"
#include "analysis.hpp"

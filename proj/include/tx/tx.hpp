// Umbrella header pulling in the whole transducer algebra library.
#pragma once

#include "base.hpp"
#include "checks.hpp"
#include "corpus.hpp"
#include "epword.hpp"
#include "format.hpp"
#include "groups.hpp"
#include "image.hpp"
#include "invert.hpp"
#include "machine.hpp"
#include "minimize.hpp"
#include "prefix_map.hpp"
#include "synchronize.hpp"

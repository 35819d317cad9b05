#pragma once

#include "gilda/bench.hpp"
#include "gilda/datagen.hpp"
#include "gilda/grassmann.hpp"
#include "gilda/lda.hpp"
#include "gilda/optim.hpp"
#include "gilda/types.hpp"

#pragma once

#include "tdesign/bounds.hpp"
#include "tdesign/designs.hpp"
#include "tdesign/error.hpp"
#include "tdesign/info.hpp"
#include "tdesign/interp.hpp"
#include "tdesign/numeric.hpp"
#include "tdesign/optim.hpp"
#include "tdesign/qcore.hpp"
#include "tdesign/serialize.hpp"

#pragma once

#include "crnext/errors.hpp"
#include "crnext/numeric.hpp"
#include "crnext/model.hpp"
#include "crnext/parser.hpp"
#include "crnext/lp.hpp"
#include "crnext/structure.hpp"
#include "crnext/forest.hpp"
#include "crnext/oracle.hpp"
#include "crnext/driver.hpp"

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "figr/figscript/errors.hpp"
#include "figr/figscript/geometry.hpp"
#include "figr/figscript/interpreter.hpp"
#include "figr/figscript/parser.hpp"
#include "figr/figscript/program.hpp"
#include "figr/figscript/raster.hpp"

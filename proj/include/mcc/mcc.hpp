#pragma once

#include "mcc/backend.hpp"
#include "mcc/brick.hpp"
#include "mcc/codegen.hpp"
#include "mcc/error.hpp"
#include "mcc/il.hpp"
#include "mcc/pipeline.hpp"
#include "mcc/render.hpp"
#include "mcc/rewrite.hpp"
#include "mcc/signature.hpp"
#include "mcc/term.hpp"
#include "mcc/tiling.hpp"

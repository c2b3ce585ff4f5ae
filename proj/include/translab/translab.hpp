#pragma once

#include "translab/core.hpp"
#include "translab/dictionary.hpp"
#include "translab/envelope.hpp"
#include "translab/lambda_sets.hpp"
#include "translab/multipoly.hpp"
#include "translab/reduction.hpp"
#include "translab/runner.hpp"
#include "translab/serialize.hpp"

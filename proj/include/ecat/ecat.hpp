#pragma once

#include "mutation.hpp"
#include "monad.hpp"
#include "dsl/serialize.hpp"

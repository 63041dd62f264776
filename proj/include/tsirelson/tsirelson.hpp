#pragma once

#include "tsirelson/bounds.hpp"
#include "tsirelson/enumerate.hpp"
#include "tsirelson/errors.hpp"
#include "tsirelson/family.hpp"
#include "tsirelson/finite_set.hpp"
#include "tsirelson/functional.hpp"
#include "tsirelson/io.hpp"
#include "tsirelson/member_oracle.hpp"
#include "tsirelson/norm_engine.hpp"
#include "tsirelson/numerics.hpp"
#include "tsirelson/vector.hpp"
#include "tsirelson/verification.hpp"
#include "tsirelson/witness.hpp"
